#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "boxlab/errors.hpp"

namespace boxlab {

// Default tolerance for clamping tiny negative entries produced by
// projector arithmetic.
inline constexpr double kClampTol = 1e-12;

// Row sums must equal 1 within this tolerance.
inline constexpr double kNormTol = 1e-9;

/// Tripartite conditional distribution p(o1 o2 o3 | i1 i2 i3), stored as an
/// 8x8 row-stochastic table. Row r = 4*i1 + 2*i2 + i3, column
/// c = 4*o1 + 2*o2 + o3 (dictionary ordering). Immutable once constructed;
/// construction validates nonnegativity and row normalization.
class Box3 {
  public:
    static constexpr int kRows = 8;
    static constexpr int kCols = 8;
    static constexpr int kSize = 64;

    explicit Box3(const std::array<double, kSize>& flat, double tol = kClampTol);

    double at(int row, int col) const { return p_[row * kCols + col]; }

    /// p(o1 o2 o3 | i1 i2 i3); all arguments are bits.
    double prob(int o1, int o2, int o3, int i1, int i2, int i3) const {
        return at(4 * i1 + 2 * i2 + i3, 4 * o1 + 2 * o2 + o3);
    }

    std::span<const double, kSize> flat() const { return std::span<const double, kSize>(p_); }

    static constexpr int row_index(int i1, int i2, int i3) { return 4 * i1 + 2 * i2 + i3; }
    static constexpr int col_index(int o1, int o2, int o3) { return 4 * o1 + 2 * o2 + o3; }

  private:
    std::array<double, kSize> p_;
};

/// Bipartite conditional distribution p(o o' | i i'), 4x4 with
/// row r = 2*i + i' and column c = 2*o + o'.
class Box2 {
  public:
    static constexpr int kRows = 4;
    static constexpr int kCols = 4;
    static constexpr int kSize = 16;

    explicit Box2(const std::array<double, kSize>& flat, double tol = kClampTol);

    double at(int row, int col) const { return p_[row * kCols + col]; }

    double prob(int o, int op, int i, int ip) const { return at(2 * i + ip, 2 * o + op); }

    std::span<const double, kSize> flat() const { return std::span<const double, kSize>(p_); }

  private:
    std::array<double, kSize> p_;
};

/// Verdict of a no-signaling scan. `max_violation` is the largest marginal
/// discrepancy found over all party subsets; `violating_party` is the
/// 1-based index of a party whose marginal moved (smallest such index at
/// the maximal violation).
struct NsReport {
    bool is_ns = false;
    double max_violation = 0.0;
    std::optional<int> violating_party;
};

/// Validating constructor from nested rows. Entries in [-tol, 0) are
/// clamped to 0; entries below -tol raise NegativeProbability; row sums off
/// by more than kNormTol raise NotNormalized.
Box3 make_box3(const std::array<std::array<double, 8>, 8>& rows, double tol = kClampTol);
Box2 make_box2(const std::array<std::array<double, 4>, 4>& rows, double tol = kClampTol);

/// Checks that, for every nonempty proper subset of parties, the marginal
/// outcome distribution is unchanged by any other party's input flip.
NsReport no_signaling_check(const Box3& b, double tol);
NsReport no_signaling_check(const Box2& b, double tol);

/// The largest-violation marginal discrepancy as a linear functional on the
/// flattened box: value() = coeffs . flat(b) = |marginal shift|, with
/// coefficients in {-1, 0, +1}. `flipping_party` / `marginal_party` are
/// 0-based. Used to certify non-membership without an LP solve.
struct NsViolationFunctional {
    std::array<double, Box3::kSize> coeffs{};
    double value = 0.0;
    int flipping_party = -1;    // party whose input flip moved the marginal
    std::array<bool, 3> marginal_subset{};  // parties whose outcomes are kept
};
NsViolationFunctional max_ns_violation(const Box3& b);

/// Entrywise convex combination. Weights must be nonnegative, sum to 1
/// within 1e-12, and match the box list in length.
Box3 mix(std::span<const Box3> boxes, std::span<const double> weights);
Box2 mix(std::span<const Box2> boxes, std::span<const double> weights);

double max_abs_diff(const Box3& a, const Box3& b);
double max_abs_diff(const Box2& a, const Box2& b);

/// Structured-text (JSON) serialization. Numbers are written with 17
/// significant digits so a round trip recovers every double exactly.
std::string serialize(const Box3& b);
std::string serialize(const Box2& b);

std::variant<Box3, Box2> deserialize_box(const std::string& text);
Box3 deserialize_box3(const std::string& text);
Box2 deserialize_box2(const std::string& text);

}  // namespace boxlab
