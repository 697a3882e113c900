#include "boxlab/bell.hpp"

#include <algorithm>
#include <vector>

namespace boxlab {

ChshVariant::ChshVariant(const std::array<int, 4>& s) : signs(s) {
    int negatives = 0;
    for (int v : s) {
        if (v != 1 && v != -1) throw Error("CHSH signs must be +1 or -1");
        if (v == -1) ++negatives;
    }
    if (negatives != 1 && negatives != 3)
        throw Error("CHSH variant needs an odd number of minus signs");
}

const std::array<ChshVariant, 8>& chsh_variants() {
    static const std::array<ChshVariant, 8> variants = [] {
        std::array<int, 4> s{};
        std::vector<ChshVariant> out;
        for (int mask = 0; mask < 16; ++mask) {
            int negatives = 0;
            for (int k = 0; k < 4; ++k) {
                s[k] = (mask >> k) & 1 ? -1 : 1;
                if (s[k] == -1) ++negatives;
            }
            if (negatives % 2 == 1) out.emplace_back(s);
        }
        return std::array<ChshVariant, 8>{out[0], out[1], out[2], out[3],
                                          out[4], out[5], out[6], out[7]};
    }();
    return variants;
}

const ChshVariant& canonical_chsh_variant() {
    static const ChshVariant v({+1, +1, -1, +1});
    return v;
}

double correlator(const Box2& b, int x, int y) {
    double e = 0.0;
    for (int o = 0; o < 2; ++o)
        for (int op = 0; op < 2; ++op)
            e += ((o ^ op) ? -1.0 : 1.0) * b.prob(o, op, x, y);
    return e;
}

double chsh_value(const Box2& b, const ChshVariant& v) {
    double s = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) s += v.signs[2 * x + y] * correlator(b, x, y);
    return s;
}

double chsh_max(const Box2& b) {
    double best = -4.0;
    for (const auto& v : chsh_variants()) best = std::max(best, chsh_value(b, v));
    return best;
}

}  // namespace boxlab
