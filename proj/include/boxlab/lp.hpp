#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "boxlab/errors.hpp"

namespace boxlab::lp {

/// Selects the tableau-update kernel. Both kernels perform the identical
/// per-entry arithmetic with the same fixed pivot rule, so verdicts,
/// weights, and witnesses are bit-identical; Serial is the reference the
/// tests compare against.
enum class Backend { Serial, OpenMP };

/// Decide whether `target` is a convex combination of the columns of
/// `vertices` (dim x n, column-major: vertices[j*dim + i]).
struct FeasibilityProblem {
    std::size_t dim = 0;
    std::size_t num_vertices = 0;
    std::vector<double> vertices;
    std::vector<double> target;
    double tol = 1e-9;

    double vertex(std::size_t j, std::size_t i) const { return vertices[j * dim + i]; }
};

enum class Verdict { In, Out };

/// Self-certifying membership answer: In carries convex weights that
/// rebuild the target within tol; Out carries a separating functional y
/// with offset c = max_j y.V_j and y.target > c + tol/2. The witness is
/// scaled so max_i |y_i| = 1.
struct MembershipResult {
    Verdict verdict = Verdict::Out;
    std::optional<std::vector<double>> weights;
    std::optional<std::vector<double>> witness;
    double witness_offset = 0.0;
    double witness_margin = 0.0;  // y.target - offset
};

/// Phase-1 simplex on {V w = target, sum w = 1, w >= 0} with Bland's rule.
/// Certificates are re-verified before returning; a certificate that fails
/// its own check raises NumericalFailure instead of a silent verdict.
MembershipResult solve_feasibility(const FeasibilityProblem& prob,
                                   Backend backend = Backend::OpenMP);

/// Several vertex systems constrained by one shared weight vector: the
/// equality blocks are stacked (one normalization row total) and solved as
/// a single feasibility problem. All problems must agree on num_vertices;
/// the witness lives in the stacked coordinate space.
MembershipResult solve_joint_feasibility(const std::vector<FeasibilityProblem>& probs,
                                         Backend backend = Backend::OpenMP);

/// Plain-loop certificate checks, independent of the solver path.
/// For In: weights nonnegative, sum 1 within tol, ||V w - target||_inf <= tol.
/// For Out: y.target > max_j y.V_j + tol/2.
bool verify_in(const FeasibilityProblem& prob, const std::vector<double>& weights,
               double* max_residual = nullptr);
bool verify_out(const FeasibilityProblem& prob, const std::vector<double>& witness,
                double* margin = nullptr);
bool verify_result(const FeasibilityProblem& prob, const MembershipResult& res);

/// Stack a joint system into one equivalent single problem (used for
/// verification of joint results).
FeasibilityProblem stack_problems(const std::vector<FeasibilityProblem>& probs);

}  // namespace boxlab::lp
