#include "boxlab/constructors.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace boxlab {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

Observable::Observable(const std::array<double, 3>& n) : bloch(n) {
    const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(norm - 1.0) > 1e-12)
        throw Error("Bloch vector norm " + std::to_string(norm) + " is not 1");
}

Observable Observable::diag(int sign) {
    return Observable({sign >= 0 ? kInvSqrt2 : -kInvSqrt2, 0.0, kInvSqrt2});
}

MeasurementAssignment MeasurementAssignment::ghz_default() {
    return MeasurementAssignment{{{
        {Observable::sigma_z(), Observable::sigma_x()},
        {Observable::sigma_z(), Observable::sigma_x()},
        {Observable::diag(+1), Observable::diag(-1)},
    }}};
}

MeasurementAssignment MeasurementAssignment::ghz_swapped23() {
    return MeasurementAssignment{{{
        {Observable::sigma_z(), Observable::sigma_x()},
        {Observable::diag(+1), Observable::diag(-1)},
        {Observable::sigma_z(), Observable::sigma_x()},
    }}};
}

EpsParams::EpsParams(double e) : eps(e) {
    if (!(e >= 0.0 && e <= 1.0))
        throw Error("eps " + std::to_string(e) + " outside [0, 1]");
}

namespace {

using cd = std::complex<double>;

// 2x2 projector (I + s n.sigma)/2 for outcome bit o (s = +1 for o=0).
std::array<cd, 4> projector(const Observable& obs, int outcome_bit) {
    const double s = outcome_bit == 0 ? 1.0 : -1.0;
    const double nx = obs.bloch[0], ny = obs.bloch[1], nz = obs.bloch[2];
    return {cd(0.5 * (1.0 + s * nz), 0.0), cd(0.5 * s * nx, -0.5 * s * ny),
            cd(0.5 * s * nx, 0.5 * s * ny), cd(0.5 * (1.0 - s * nz), 0.0)};
}

// Apply a 2x2 operator to qubit `q` (0 = most significant) of an 8-vector.
void apply_qubit_op(std::array<cd, 8>& psi, const std::array<cd, 4>& op, int q) {
    const int stride = 4 >> q;  // 4, 2, 1
    for (int base = 0; base < 8; ++base) {
        if (base & stride) continue;
        const cd a = psi[base];
        const cd b = psi[base + stride];
        psi[base] = op[0] * a + op[1] * b;
        psi[base + stride] = op[2] * a + op[3] * b;
    }
}

}  // namespace

Box3 ghz_box(const MeasurementAssignment& m) {
    std::array<double, Box3::kSize> flat{};
    const std::array<cd, 8> ghz = {cd(kInvSqrt2, 0), 0, 0, 0, 0, 0, 0, cd(kInvSqrt2, 0)};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int i3 = 0; i3 < 2; ++i3) {
                const std::array<int, 3> in{i1, i2, i3};
                for (int o1 = 0; o1 < 2; ++o1)
                    for (int o2 = 0; o2 < 2; ++o2)
                        for (int o3 = 0; o3 < 2; ++o3) {
                            const std::array<int, 3> out{o1, o2, o3};
                            std::array<cd, 8> psi = ghz;
                            for (int q = 0; q < 3; ++q)
                                apply_qubit_op(psi, projector(m.obs[q][in[q]], out[q]), q);
                            cd amp = 0.0;
                            for (int k = 0; k < 8; ++k) amp += std::conj(ghz[k]) * psi[k];
                            flat[Box3::row_index(i1, i2, i3) * 8 +
                                 Box3::col_index(o1, o2, o3)] = amp.real();
                        }
            }
    return Box3(flat);
}

Box3 ghz_box() { return ghz_box(MeasurementAssignment::ghz_default()); }

namespace {

// Patterns of the one-way family tables; +2/-2 mean 2k+/2k-, +1/-1 mean
// k+/k-, 0 means 0. A global prefactor 1/2 is applied on top.
constexpr int kLeftPattern[8][8] = {
    {+2, -2, 0, 0, 0, 0, -2, +2},
    {+2, -2, 0, 0, 0, 0, -2, +2},
    {+1, -1, +1, -1, -1, +1, -1, +1},
    {+1, -1, +1, -1, -1, +1, -1, +1},
    {+1, -1, -1, +1, +1, -1, -1, +1},
    {+1, -1, -1, +1, +1, -1, -1, +1},
    {+1, -1, -1, +1, -1, +1, +1, -1},
    {-1, +1, +1, -1, +1, -1, -1, +1},
};

constexpr int kRightPattern[8][8] = {
    {+2, 0, -2, 0, 0, -2, 0, +2},
    {+1, +1, -1, -1, -1, -1, +1, +1},
    {+2, 0, -2, 0, 0, -2, 0, +2},
    {+1, +1, -1, -1, -1, -1, +1, +1},
    {+1, -1, -1, +1, +1, -1, -1, +1},
    {+1, -1, -1, +1, -1, +1, +1, -1},
    {+1, -1, -1, +1, +1, -1, -1, +1},
    {-1, +1, +1, -1, +1, -1, -1, +1},
};

Box3 eps_family(const int pattern[8][8], const EpsParams& e) {
    const double kp = e.k_plus(), km = e.k_minus();
    std::array<double, Box3::kSize> flat{};
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            double v = 0.0;
            switch (pattern[r][c]) {
                case +2: v = 2.0 * kp; break;
                case -2: v = 2.0 * km; break;
                case +1: v = kp; break;
                case -1: v = km; break;
                default: v = 0.0; break;
            }
            flat[r * 8 + c] = 0.5 * v;
        }
    return Box3(flat);
}

}  // namespace

Box3 p_eps_left(const EpsParams& e) { return eps_family(kLeftPattern, e); }

Box3 p_eps_right(const EpsParams& e) { return eps_family(kRightPattern, e); }

Box3 p_eps_alpha(const EpsParams& e, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw BadWeights("alpha " + std::to_string(alpha) + " outside [0, 1]");
    const std::array<Box3, 2> parts{p_eps_left(e), p_eps_right(e)};
    const std::array<double, 2> w{alpha, 1.0 - alpha};
    return mix(std::span<const Box3>(parts), std::span<const double>(w));
}

Box2 pr_box(int a, int b, int g) {
    if ((a | b | g) & ~1) throw Error("pr_box bits must be 0 or 1");
    std::array<double, Box2::kSize> flat{};
    for (int i = 0; i < 2; ++i)
        for (int ip = 0; ip < 2; ++ip)
            for (int o = 0; o < 2; ++o)
                for (int op = 0; op < 2; ++op) {
                    const int lhs = o ^ op;
                    const int rhs = (i & ip) ^ (a & i) ^ (b & ip) ^ g;
                    flat[(2 * i + ip) * 4 + (2 * o + op)] = lhs == rhs ? 0.5 : 0.0;
                }
    return Box2(flat);
}

namespace {

int apply1(int code, int x) { return (code >> x) & 1; }
int apply2(int code, int x, int y) { return (code >> (2 * x + y)) & 1; }

void check_code(int code, int max, const char* what) {
    if (code < 0 || code >= max)
        throw Error(std::string(what) + " code " + std::to_string(code) +
                    " out of range [0, " + std::to_string(max) + ")");
}

}  // namespace

Party1Table det_box1(int code) {
    check_code(code, 4, "party-1 strategy");
    Party1Table t{};
    for (int i = 0; i < 2; ++i) t[i][apply1(code, i)] = 1.0;
    return t;
}

Box2 det_box2_local(int f2, int f3) {
    check_code(f2, 4, "local strategy");
    check_code(f3, 4, "local strategy");
    std::array<double, Box2::kSize> flat{};
    for (int i2 = 0; i2 < 2; ++i2)
        for (int i3 = 0; i3 < 2; ++i3)
            flat[(2 * i2 + i3) * 4 + (2 * apply1(f2, i2) + apply1(f3, i3))] = 1.0;
    return Box2(flat);
}

Box2 det_box2_oneway(OneWayDir dir, int f, int g) {
    check_code(f, 4, "one-way strategy");
    check_code(g, 16, "one-way strategy");
    std::array<double, Box2::kSize> flat{};
    for (int i2 = 0; i2 < 2; ++i2)
        for (int i3 = 0; i3 < 2; ++i3) {
            int o2, o3;
            if (dir == OneWayDir::ThreeToTwo) {
                o3 = apply1(f, i3);
                o2 = apply2(g, i2, i3);
            } else {
                o2 = apply1(f, i2);
                o3 = apply2(g, i2, i3);
            }
            flat[(2 * i2 + i3) * 4 + (2 * o2 + o3)] = 1.0;
        }
    return Box2(flat);
}

Box2 det_box2_twoway(int g2, int g3) {
    check_code(g2, 16, "two-way strategy");
    check_code(g3, 16, "two-way strategy");
    std::array<double, Box2::kSize> flat{};
    for (int i2 = 0; i2 < 2; ++i2)
        for (int i3 = 0; i3 < 2; ++i3)
            flat[(2 * i2 + i3) * 4 + (2 * apply2(g2, i2, i3) + apply2(g3, i2, i3))] = 1.0;
    return Box2(flat);
}

Box3 noise_box() {
    std::array<double, Box3::kSize> flat{};
    flat.fill(1.0 / 8.0);
    return Box3(flat);
}

Box3 tensor_product(const Party1Table& p1, const Box2& q) {
    std::array<double, Box3::kSize> flat{};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int i3 = 0; i3 < 2; ++i3)
                for (int o1 = 0; o1 < 2; ++o1)
                    for (int o2 = 0; o2 < 2; ++o2)
                        for (int o3 = 0; o3 < 2; ++o3)
                            flat[Box3::row_index(i1, i2, i3) * 8 +
                                 Box3::col_index(o1, o2, o3)] =
                                p1[i1][o1] * q.prob(o2, o3, i2, i3);
    return Box3(flat);
}

Box3 swap_parties_23(const Box3& b) {
    std::array<double, Box3::kSize> flat{};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int i3 = 0; i3 < 2; ++i3)
                for (int o1 = 0; o1 < 2; ++o1)
                    for (int o2 = 0; o2 < 2; ++o2)
                        for (int o3 = 0; o3 < 2; ++o3)
                            flat[Box3::row_index(i1, i2, i3) * 8 +
                                 Box3::col_index(o1, o2, o3)] =
                                b.prob(o1, o3, o2, i1, i3, i2);
    return Box3(flat);
}

}  // namespace boxlab
