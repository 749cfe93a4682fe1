#pragma once

#include "qcf/qcore.hpp"

namespace qcf {

// Radical inverse of index in the given base (Halton sequence component).
double halton(unsigned long long index, unsigned base);

// Deterministic stream of points in the annulus rlo <= |x| <= rhi:
// log-radius from the base-2 Halton sequence, angle from base 3. Points
// within `clearance` of an exclusion spiral are skipped, so runs are
// reproducible without a seed while staying clear of theta zeros.
class HaltonAnnulus {
public:
    HaltonAnnulus(double rlo, double rhi) : rlo_(rlo), rhi_(rhi) {}

    cplx next();
    cplx next_admissible(const QParam& qp, const SpiralSet& exclusions, double clearance);

private:
    double rlo_;
    double rhi_;
    unsigned long long index_ = 0;
};

} // namespace qcf
