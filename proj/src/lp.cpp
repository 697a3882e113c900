#include "boxlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace boxlab::lp {

namespace {

constexpr double kPivotTol = 1e-10;

// Work size above which the OpenMP kernel actually forks threads.
constexpr std::size_t kParallelCutoff = 1 << 16;

// Eliminate the pivot column from every row but the (already normalized)
// pivot row. Reference kernel.
void eliminate_serial(double* tab, std::size_t rows, std::size_t stride,
                      std::size_t pivot_row, std::size_t pivot_col) {
    const double* piv = tab + pivot_row * stride;
    for (std::size_t i = 0; i < rows; ++i) {
        if (i == pivot_row) continue;
        double* row = tab + i * stride;
        const double f = row[pivot_col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < stride; ++j) row[j] -= f * piv[j];
        row[pivot_col] = 0.0;
    }
}

// Same arithmetic with the row loop distributed over threads; each row is
// touched by exactly one thread, so the result is bit-identical to the
// serial kernel.
void eliminate_omp(double* tab, std::size_t rows, std::size_t stride,
                   std::size_t pivot_row, std::size_t pivot_col) {
    const double* piv = tab + pivot_row * stride;
    const bool fork = rows * stride >= kParallelCutoff;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (fork)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows); ++i) {
        if (static_cast<std::size_t>(i) == pivot_row) continue;
        double* row = tab + static_cast<std::size_t>(i) * stride;
        const double f = row[pivot_col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < stride; ++j) row[j] -= f * piv[j];
        row[pivot_col] = 0.0;
    }
#ifndef _OPENMP
    (void)fork;
#endif
}

void validate_problem(const FeasibilityProblem& prob) {
    if (prob.dim == 0 || prob.num_vertices == 0)
        throw Error("feasibility problem needs dim >= 1 and n >= 1");
    if (prob.vertices.size() != prob.dim * prob.num_vertices)
        throw Error("vertex matrix size mismatch");
    if (prob.target.size() != prob.dim) throw Error("target size mismatch");
}

struct Phase1 {
    std::size_t m;        // constraint rows (dim + 1)
    std::size_t n;        // original columns
    std::size_t stride;   // n + m + 1 (artificials + rhs)
    std::vector<double> tab;  // (m + 1) rows, last row = reduced costs
    std::vector<int> basis;
    std::vector<double> flip;  // per-row sign applied to make rhs >= 0

    double& at(std::size_t i, std::size_t j) { return tab[i * stride + j]; }
    double at(std::size_t i, std::size_t j) const { return tab[i * stride + j]; }
    std::size_t rhs() const { return stride - 1; }

    double infeasibility() const {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] >= static_cast<int>(n)) s += at(i, rhs());
        return s;
    }
};

Phase1 build_tableau(const FeasibilityProblem& prob) {
    Phase1 t;
    t.m = prob.dim + 1;
    t.n = prob.num_vertices;
    t.stride = t.n + t.m + 1;
    t.tab.assign((t.m + 1) * t.stride, 0.0);
    t.basis.resize(t.m);
    t.flip.assign(t.m, 1.0);

    for (std::size_t i = 0; i < t.m; ++i) {
        const double b = i < prob.dim ? prob.target[i] : 1.0;
        if (b < 0.0) t.flip[i] = -1.0;
        for (std::size_t j = 0; j < t.n; ++j) {
            const double a = i < prob.dim ? prob.vertex(j, i) : 1.0;
            t.at(i, j) = t.flip[i] * a;
        }
        t.at(i, t.n + i) = 1.0;
        t.at(i, t.rhs()) = t.flip[i] * b;
        t.basis[i] = static_cast<int>(t.n + i);
    }
    // Reduced costs: r_j = c_j - y.A_j with y = 1 (all-artificial basis).
    for (std::size_t j = 0; j < t.stride; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < t.m; ++i) col += t.at(i, j);
        const double c = j >= t.n && j < t.n + t.m ? 1.0 : 0.0;
        t.at(t.m, j) = c - col;
    }
    return t;
}

// Phase-1 with a fixed two-stage pivot rule: Dantzig entering (most
// negative reduced cost) while the objective makes progress, switching
// permanently to Bland's rule after a stall. Bland alone crawls through the
// heavily degenerate joint systems; Dantzig alone may cycle. The switch
// point is part of the deterministic rule. Artificial columns never
// re-enter. Returns the exact residual infeasibility at termination.
double run_simplex(Phase1& t, Backend backend) {
    constexpr int kStallLimit = 64;
    constexpr double kProgressTol = 1e-13;
    std::vector<char> blocked(t.n, 0);  // columns abandoned for lack of a pivot row
    const std::size_t max_iters = 64 * (t.n + t.m) + 4096;
    bool bland = false;
    double last_obj = 1e300;
    int stalled = 0;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        const double obj = t.infeasibility();
        if (obj <= 1e-14) break;
        if (obj < last_obj - kProgressTol) {
            last_obj = obj;
            stalled = 0;
        } else if (!bland && ++stalled >= kStallLimit) {
            bland = true;
        }

        std::size_t enter = t.n;
        if (bland) {
            // Smallest original column index with negative reduced cost.
            for (std::size_t j = 0; j < t.n; ++j) {
                if (!blocked[j] && t.at(t.m, j) < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
        } else {
            double best = -kPivotTol;
            for (std::size_t j = 0; j < t.n; ++j) {
                const double r = t.at(t.m, j);
                if (!blocked[j] && r < best) {
                    best = r;
                    enter = j;
                }
            }
        }
        if (enter == t.n) break;  // optimal over the usable columns

        // Leaving: min ratio. Ties go to the smallest basis label under
        // Bland, to the largest pivot element (then smallest label) before.
        std::size_t leave = t.m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < t.m; ++i) {
            const double a = t.at(i, enter);
            if (a <= kPivotTol) continue;
            const double ratio = t.at(i, t.rhs()) / a;
            bool better = false;
            if (leave == t.m || ratio < best_ratio)
                better = true;
            else if (ratio == best_ratio) {
                if (bland)
                    better = t.basis[i] < t.basis[leave];
                else
                    better = a > t.at(leave, enter) ||
                             (a == t.at(leave, enter) && t.basis[i] < t.basis[leave]);
            }
            if (better) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == t.m) {
            blocked[enter] = 1;  // numerically unusable; certificate check
            continue;            // will veto the verdict if this mattered
        }

        // Normalize pivot row, then eliminate everywhere else.
        double* piv = &t.at(leave, 0);
        const double inv = 1.0 / piv[enter];
        for (std::size_t j = 0; j < t.stride; ++j) piv[j] *= inv;
        piv[enter] = 1.0;
        if (backend == Backend::OpenMP)
            eliminate_omp(t.tab.data(), t.m + 1, t.stride, leave, enter);
        else
            eliminate_serial(t.tab.data(), t.m + 1, t.stride, leave, enter);
        t.basis[leave] = static_cast<int>(enter);
    }
    return t.infeasibility();
}

}  // namespace

bool verify_in(const FeasibilityProblem& prob, const std::vector<double>& weights,
               double* max_residual) {
    if (weights.size() != prob.num_vertices) return false;
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) return false;
        sum += w;
    }
    double res = std::abs(sum - 1.0);
    for (std::size_t i = 0; i < prob.dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < prob.num_vertices; ++j)
            acc += weights[j] * prob.vertex(j, i);
        res = std::max(res, std::abs(acc - prob.target[i]));
    }
    if (max_residual) *max_residual = res;
    return res <= prob.tol;
}

bool verify_out(const FeasibilityProblem& prob, const std::vector<double>& witness,
                double* margin) {
    if (witness.size() != prob.dim) return false;
    double best = -1e300;
    for (std::size_t j = 0; j < prob.num_vertices; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < prob.dim; ++i)
            v += witness[i] * prob.vertex(j, i);
        best = std::max(best, v);
    }
    double yt = 0.0;
    for (std::size_t i = 0; i < prob.dim; ++i) yt += witness[i] * prob.target[i];
    if (margin) *margin = yt - best;
    return yt > best + prob.tol / 2.0;
}

bool verify_result(const FeasibilityProblem& prob, const MembershipResult& res) {
    if (res.verdict == Verdict::In)
        return res.weights.has_value() && verify_in(prob, *res.weights);
    return res.witness.has_value() && verify_out(prob, *res.witness);
}

MembershipResult solve_feasibility(const FeasibilityProblem& prob, Backend backend) {
    validate_problem(prob);
    Phase1 t = build_tableau(prob);
    const double residual = run_simplex(t, backend);

    MembershipResult res;
    if (residual <= prob.tol) {
        std::vector<double> w(prob.num_vertices, 0.0);
        for (std::size_t i = 0; i < t.m; ++i) {
            if (t.basis[i] < static_cast<int>(t.n)) {
                double v = t.at(i, t.rhs());
                if (v < 0.0 && v >= -prob.tol) v = 0.0;
                w[t.basis[i]] = v;
            }
        }
        double rec = 0.0;
        if (!verify_in(prob, w, &rec))
            throw NumericalFailure("feasible basis fails re-verification, residual " +
                                   std::to_string(rec));
        res.verdict = Verdict::In;
        res.weights = std::move(w);
        return res;
    }

    // Farkas certificate from the artificial columns' reduced costs:
    // y_i = flip_i * (1 - r_{art_i}).
    std::vector<double> y(prob.dim);
    double scale = 0.0;
    for (std::size_t i = 0; i < prob.dim; ++i) {
        y[i] = t.flip[i] * (1.0 - t.at(t.m, t.n + i));
        scale = std::max(scale, std::abs(y[i]));
    }
    if (scale <= 0.0)
        throw NumericalFailure("degenerate Farkas vector (all zeros)");
    for (double& v : y) v /= scale;

    double offset = -1e300;
    for (std::size_t j = 0; j < prob.num_vertices; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < prob.dim; ++i) v += y[i] * prob.vertex(j, i);
        offset = std::max(offset, v);
    }
    double margin = 0.0;
    if (!verify_out(prob, y, &margin))
        throw NumericalFailure("Farkas witness fails separation check, margin " +
                               std::to_string(margin));
    res.verdict = Verdict::Out;
    res.witness = std::move(y);
    res.witness_offset = offset;
    res.witness_margin = margin;
    return res;
}

FeasibilityProblem stack_problems(const std::vector<FeasibilityProblem>& probs) {
    if (probs.empty()) throw Error("joint feasibility needs at least one problem");
    const std::size_t n = probs[0].num_vertices;
    std::size_t dim = 0;
    double tol = probs[0].tol;
    for (const auto& p : probs) {
        validate_problem(p);
        if (p.num_vertices != n)
            throw Error("joint problems must share the vertex count");
        dim += p.dim;
        tol = std::min(tol, p.tol);
    }
    FeasibilityProblem stacked;
    stacked.dim = dim;
    stacked.num_vertices = n;
    stacked.tol = tol;
    stacked.vertices.resize(dim * n);
    stacked.target.resize(dim);
    std::size_t off = 0;
    for (const auto& p : probs) {
        for (std::size_t i = 0; i < p.dim; ++i) stacked.target[off + i] = p.target[i];
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < p.dim; ++i)
                stacked.vertices[j * dim + off + i] = p.vertex(j, i);
        off += p.dim;
    }
    return stacked;
}

MembershipResult solve_joint_feasibility(const std::vector<FeasibilityProblem>& probs,
                                         Backend backend) {
    return solve_feasibility(stack_problems(probs), backend);
}

}  // namespace boxlab::lp
