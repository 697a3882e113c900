#pragma once

#include <array>

#include "boxlab/box.hpp"

namespace boxlab {

/// Dichotomic qubit observable n.sigma given by a unit Bloch vector.
/// Outcome +1 maps to bit 0 and -1 to bit 1.
struct Observable {
    std::array<double, 3> bloch;

    explicit Observable(const std::array<double, 3>& n);

    static Observable sigma_z() { return Observable({0.0, 0.0, 1.0}); }
    static Observable sigma_x() { return Observable({1.0, 0.0, 0.0}); }
    /// (sigma_z + sign*sigma_x)/sqrt(2)
    static Observable diag(int sign);
};

/// Two observables per party, indexed by the party's input bit.
struct MeasurementAssignment {
    std::array<std::array<Observable, 2>, 3> obs;

    /// Parties 1,2 measure {sigma_z, sigma_x}; party 3 measures
    /// {(sigma_z+sigma_x)/sqrt2, (sigma_z-sigma_x)/sqrt2}.
    static MeasurementAssignment ghz_default();
    /// Same with the roles of parties 2 and 3 interchanged.
    static MeasurementAssignment ghz_swapped23();
};

/// Bias parameter of the one-way box family: k_plus = (1+eps)/4,
/// k_minus = (1-eps)/4.
struct EpsParams {
    double eps;

    explicit EpsParams(double e);

    double k_plus() const { return (1.0 + eps) / 4.0; }
    double k_minus() const { return (1.0 - eps) / 4.0; }
};

/// Correlation of projective measurements on the GHZ state
/// (|000> + |111>)/sqrt2. Projectors are built analytically as
/// (I + s n.sigma)/2 and applied to the 8-dimensional state vector.
Box3 ghz_box(const MeasurementAssignment& m);
Box3 ghz_box();  // ghz_default assignment

/// The one-way box families. Left allows signaling from party 3 to party 2,
/// right from party 2 to party 3.
Box3 p_eps_left(const EpsParams& e);
Box3 p_eps_right(const EpsParams& e);

/// alpha * p_eps_left + (1-alpha) * p_eps_right.
Box3 p_eps_alpha(const EpsParams& e, double alpha);

/// PR-family extremal bipartite box: p(oo'|ii') = 1/2 if
/// o xor o' = i*i' xor a*i xor b*i' xor g, else 0.
Box2 pr_box(int a, int b, int g);

/// Single-party deterministic response p(o|i), o = f(i), indexed [i][o].
/// The strategy code encodes f(i) = (code >> i) & 1.
using Party1Table = std::array<std::array<double, 2>, 2>;
Party1Table det_box1(int code);

/// Deterministic bipartite strategies over parties 2,3. Function codes:
/// a 1-bit-input function f is f(x) = (code >> x) & 1 (code in [0,4));
/// a 2-bit-input function g is g(x,y) = (code >> (2x+y)) & 1 (code in [0,16)).
Box2 det_box2_local(int f2, int f3);           // o2 = f2(i2), o3 = f3(i3)

enum class OneWayDir {
    ThreeToTwo,  // "left": o3 = f(i3), o2 = g(i2, i3)
    TwoToThree,  // "right": o2 = f(i2), o3 = g(i2, i3)
};
Box2 det_box2_oneway(OneWayDir dir, int f, int g);

Box2 det_box2_twoway(int g2, int g3);          // o2 = g2(i2,i3), o3 = g3(i2,i3)

/// Uniform tripartite noise, every entry 1/8.
Box3 noise_box();

/// p(o1|i1) * q(o2 o3|i2 i3).
Box3 tensor_product(const Party1Table& p1, const Box2& q);

/// Swap the roles of parties 2 and 3 (rows and columns relabeled).
Box3 swap_parties_23(const Box3& b);

}  // namespace boxlab
