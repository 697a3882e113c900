#include "boxlab/scan.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

#include "boxlab/bell.hpp"
#include "boxlab/constructors.hpp"
#include "boxlab/wiring.hpp"

namespace boxlab {

std::vector<double> grid_points(double min, double max, double step) {
    if (!(step > 0.0)) throw Error("grid step must be positive");
    if (!(min <= max)) throw Error("grid range is empty");
    if (min < 0.0 || max > 1.0) throw Error("grid range must lie within [0, 1]");
    const auto count = static_cast<std::size_t>(
        std::floor((max - min) / step + 1e-9));
    std::vector<double> pts;
    pts.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        double v = min + static_cast<double>(i) * step;
        if (v > max) v = max;
        pts.push_back(v);
    }
    return pts;
}

namespace {

ScanRecord evaluate_cell(double eps, double alpha, const ScanOptions& opt) {
    ScanRecord rec;
    rec.eps = eps;
    rec.alpha = alpha;
    const Box3 box = p_eps_alpha(EpsParams(eps), alpha);
    const auto& canonical = canonical_chsh_variant();
    rec.chsh_2to3 = chsh_value(wire_2to3(box), canonical);
    rec.chsh_3to2 = chsh_value(wire_3to2(box), canonical);
    if (opt.lp) {
        auto in = [&](HierarchyClass c) {
            return membership(box, c, opt.tol, opt.backend).verdict ==
                   lp::Verdict::In;
        };
        rec.in_fl = in(HierarchyClass::FL);
        rec.in_nsbl = in(HierarchyClass::NSBL);
        rec.in_atobl_left = in(HierarchyClass::ATOBL_LEFT);
        rec.in_atobl_right = in(HierarchyClass::ATOBL_RIGHT);
        rec.in_hull = in(HierarchyClass::ATOBL_HULL);
        rec.in_bl = in(HierarchyClass::BL);
        if (opt.lp_tobl) rec.in_tobl = in(HierarchyClass::TOBL);
        check_hierarchy_consistency(
            *rec.in_fl, *rec.in_nsbl, rec.in_tobl.value_or(*rec.in_nsbl),
            *rec.in_atobl_left, *rec.in_atobl_right,
            *rec.in_atobl_left || *rec.in_atobl_right, *rec.in_hull, *rec.in_bl);
    }
    return rec;
}

}  // namespace

std::vector<ScanRecord> run_scan(const ScanOptions& opt) {
    const auto eps_pts = grid_points(opt.eps_min, opt.eps_max, opt.eps_step);
    const auto alpha_pts = grid_points(opt.alpha_min, opt.alpha_max, opt.alpha_step);
    const std::size_t total = eps_pts.size() * alpha_pts.size();
    std::vector<ScanRecord> records(total);
    std::exception_ptr failure;

    // Cells are stored by grid index, so the output order is independent of
    // the execution order.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt.backend == lp::Backend::OpenMP)
#endif
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(total); ++idx) {
        try {
            const std::size_t e = static_cast<std::size_t>(idx) / alpha_pts.size();
            const std::size_t a = static_cast<std::size_t>(idx) % alpha_pts.size();
            records[idx] = evaluate_cell(eps_pts[e], alpha_pts[a], opt);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ScanRecord>& records,
               const ScanOptions& opt) {
    os << "eps,alpha,chsh_2to3,chsh_3to2";
    if (opt.lp) {
        os << ",in_fl,in_nsbl";
        if (opt.lp_tobl) os << ",in_tobl";
        os << ",in_atobl_left,in_atobl_right,in_hull,in_bl";
    }
    os << "\n";
    for (const auto& r : records) {
        os << num(r.eps) << ',' << num(r.alpha) << ',' << num(r.chsh_2to3) << ','
           << num(r.chsh_3to2);
        if (opt.lp) {
            auto flag = [&os](const std::optional<bool>& b) {
                os << ',' << (b.value() ? '1' : '0');
            };
            flag(r.in_fl);
            flag(r.in_nsbl);
            if (opt.lp_tobl) flag(r.in_tobl);
            flag(r.in_atobl_left);
            flag(r.in_atobl_right);
            flag(r.in_hull);
            flag(r.in_bl);
        }
        os << "\n";
    }
}

}  // namespace boxlab
