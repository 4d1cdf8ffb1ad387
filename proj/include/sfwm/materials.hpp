#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sfwm::materials {

/// One term B·λ²/(λ² − C) of a Sellmeier expansion, C in µm².
struct SellmeierTerm {
    double b;
    double c_um2;
    bool operator==(const SellmeierTerm&) const = default;
};

/// n²(λ) = A + Σ B_k λ²/(λ² − C_k), λ in µm. Evaluation outside the validity
/// range throws OutOfRange.
class SellmeierModel {
public:
    SellmeierModel(std::vector<SellmeierTerm> terms, double lambda_min_um, double lambda_max_um,
                   double constant_offset = 1.0);

    double index(double lambda_um) const;
    /// Closed-form dn/dλ in 1/µm.
    double dindex(double lambda_um) const;

    const std::vector<SellmeierTerm>& terms() const { return terms_; }
    double constant_offset() const { return offset_; }
    std::pair<double, double> validity_range() const { return {lambda_min_, lambda_max_}; }

private:
    void check_range(double lambda_um) const;

    std::vector<SellmeierTerm> terms_;
    double lambda_min_;
    double lambda_max_;
    double offset_;
};

/// Piecewise-linear table over wavelength, clamped (with a warning) outside
/// its span.
class WavelengthTable {
public:
    WavelengthTable() = default;
    explicit WavelengthTable(std::vector<std::pair<double, double>> knots);

    bool empty() const { return knots_.empty(); }
    double at(double lambda_um, const std::string& label) const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

class MaterialModel;

enum class MixingRule {
    IndexMean,        // n = f·n_a + (1−f)·n_b
    PermittivityMean, // n = sqrt(f·n_a² + (1−f)·n_b²)
};

struct Mixture {
    std::shared_ptr<const MaterialModel> a;
    std::shared_ptr<const MaterialModel> b;
    double fill_a; // fraction of constituent a, in [0,1]
    MixingRule rule = MixingRule::IndexMean;
};

struct ConstantIndex {
    double n;
};

using IndexModel = std::variant<ConstantIndex, SellmeierModel, Mixture>;

/// Immutable dispersive material description.
class MaterialModel {
public:
    MaterialModel(std::string name, IndexModel index, WavelengthTable n2 = {}, WavelengthTable absorption = {});

    const std::string& name() const { return name_; }
    const IndexModel& index_model() const { return index_; }
    const WavelengthTable& n2_table() const { return n2_; }
    const WavelengthTable& absorption_table() const { return absorption_; }

    double refractive_index(double lambda_um) const;
    double dindex(double lambda_um) const;
    /// Nonlinear index in m²/W.
    double nonlinear_index(double lambda_um) const;
    /// Absorption in dB/cm.
    double absorption(double lambda_um) const;

    /// Wavelength span over which refractive_index is defined.
    std::pair<double, double> validity_range() const;

private:
    std::string name_;
    IndexModel index_;
    WavelengthTable n2_;
    WavelengthTable absorption_;
};

using MaterialPtr = std::shared_ptr<const MaterialModel>;

MaterialPtr silicon();
MaterialPtr silica();
MaterialPtr air();
/// 90 % air / 10 % silica composite used for the air-hole cladding of the
/// photonic crystal fibre in the step-index idealisation.
MaterialPtr pcf_cladding_90(MixingRule rule = MixingRule::IndexMean);

bool is_reserved_name(const std::string& name);

/// Name → material registry. Starts with the built-ins; user materials may be
/// added under non-reserved names.
class Library {
public:
    Library();

    void add(MaterialPtr material);
    /// Switch the built-in PCF cladding between index and permittivity mean.
    void set_pcf_mixing(MixingRule rule);
    MaterialPtr get(const std::string& name) const;
    bool contains(const std::string& name) const { return entries_.count(name) != 0; }
    std::vector<std::string> names() const;

private:
    std::map<std::string, MaterialPtr> entries_;
};

} // namespace sfwm::materials
