#pragma once

#include "sfwm/fd_operator.hpp"
#include "sfwm/modes.hpp"

#include <vector>

namespace sfwm::modes::detail {

std::vector<Region> rect_regions(const Grid& grid, double width_um, double height_um);

struct Unfold {
    bool mirror_x;
    bool mirror_y;
    Wall x_wall; // wall type on the x = 0 mirror plane
    Wall y_wall; // wall type on the y = 0 mirror plane
};

/// Expand a solution on the upper/right part of the window to the full grid
/// using the parities implied by the mirror-plane wall types.
ModeField unfold_field(const FdMode& mode, int nx_local, int ny_local, const Grid& full, const Unfold& u);

double te_fraction(const ModeField& f);
/// Sign changes of the dominant transverse component along the horizontal and
/// vertical cuts through the window centre, ignoring the evanescent tails.
int nodal_crossings(const ModeField& f, bool dominant_x);
/// Scale to ∬|E_t|² = 1 (µm²) with the dominant component positive at its peak.
void normalize(ModeField& f, bool dominant_x);
double boundary_ratio(const ModeField& f);

} // namespace sfwm::modes::detail
