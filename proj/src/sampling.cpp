#include "qcf/sampling.hpp"

#include <cmath>

namespace qcf {

double halton(unsigned long long index, unsigned base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

cplx HaltonAnnulus::next() {
    ++index_;
    double u1 = halton(index_, 2);
    double u2 = halton(index_, 3);
    double r = rlo_ * std::pow(rhi_ / rlo_, u1);
    return std::polar(r, 2.0 * M_PI * u2);
}

cplx HaltonAnnulus::next_admissible(const QParam& qp, const SpiralSet& exclusions,
                                    double clearance) {
    SpiralSet s = exclusions;
    s.guard = clearance;
    for (int tries = 0; tries < 100000; ++tries) {
        cplx x = next();
        if (!s.contains(qp, x)) return x;
    }
    throw convergence_error("HaltonAnnulus: no admissible point found");
}

} // namespace qcf
