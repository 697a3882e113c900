#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "boxlab/classify.hpp"
#include "boxlab/lp.hpp"

namespace boxlab {

/// One (eps, alpha) grid cell: the canonical CHSH values of the two wirings
/// and, when enabled, the per-class LP verdicts for the mixed one-way box.
struct ScanRecord {
    double eps = 0.0;
    double alpha = 0.0;
    double chsh_2to3 = 0.0;
    double chsh_3to2 = 0.0;
    std::optional<bool> in_fl, in_nsbl, in_tobl, in_atobl_left, in_atobl_right,
        in_hull, in_bl;
};

struct ScanOptions {
    double eps_min = 0.0, eps_max = 1.0, eps_step = 0.1;
    double alpha_min = 0.0, alpha_max = 1.0, alpha_step = 0.25;
    bool lp = false;       // FL/NSBL/ATOBL/HULL/BL columns
    bool lp_tobl = false;  // the joint TOBL column (the slow one)
    double tol = kDefaultTol;
    lp::Backend backend = lp::Backend::OpenMP;
};

/// Points min, min+step, ... at exact multiples of the step; a final point
/// that overshoots max by rounding is clamped to max. The count is
/// floor((max-min)/step + 1e-9) + 1, so a point within 1e-9 steps of max is
/// included (half-open rounding at the far end).
std::vector<double> grid_points(double min, double max, double step);

/// Evaluates the grid in a deterministic row order (eps outer, alpha
/// inner); grid cells are independent and run concurrently under the
/// OpenMP backend.
std::vector<ScanRecord> run_scan(const ScanOptions& opt);

/// CSV with fixed header order
/// eps,alpha,chsh_2to3,chsh_3to2,in_fl,in_nsbl,in_tobl,in_atobl_left,
/// in_atobl_right,in_hull,in_bl; columns disabled by the options are
/// omitted. Booleans print as 1/0. Byte-deterministic for equal options.
void write_csv(std::ostream& os, const std::vector<ScanRecord>& records,
               const ScanOptions& opt);

}  // namespace boxlab
