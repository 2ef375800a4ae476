#include "ecgid/morph.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace ecgid::morph {

MorphDescriptors compute_descriptors(std::span<const double> x, double fs) {
    const size_t n = x.size();
    if (n < 2) throw std::invalid_argument("descriptor window needs at least 2 samples");

    MorphDescriptors d;
    size_t imax = 0, imin = 0;
    for (size_t i = 0; i < n; ++i) {
        if (x[i] > x[imax]) imax = i;  // first occurrence wins ties
        if (x[i] < x[imin]) imin = i;
        if (x[i] > 0) d.ArP += x[i];
        else d.ArN += -x[i];
    }
    d.Pp = x[imax] > 0 ? x[imax] : 0.0;
    d.Pn = x[imin] < 0 ? x[imin] : 0.0;
    d.Ar = d.ArP + d.ArN;

    // Samples above 70% of the dominant peak's absolute amplitude.
    const double threshold = 0.70 * std::max(std::abs(d.Pp), std::abs(d.Pn));
    for (size_t i = 0; i < n; ++i)
        if (std::abs(x[i]) > threshold) ++d.No;

    const double ms_per_sample = 1000.0 / fs;
    d.Ima = static_cast<double>(imax) * ms_per_sample;
    d.Imi = static_cast<double>(imin) * ms_per_sample;

    // First peak = earlier of the two extrema in time.
    const size_t first = std::min(imax, imin);
    const size_t second = std::max(imax, imin);
    const double t_first = static_cast<double>(first) * ms_per_sample;
    const double t_second = static_cast<double>(second) * ms_per_sample;
    d.S1 = t_first > 0 ? (x[first] - x[0]) / t_first : 0.0;
    d.S2 = second > first ? (x[second] - x[first]) / (t_second - t_first) : 0.0;
    return d;
}

std::array<double, 10> to_row(const MorphDescriptors& d) {
    return {d.Pp, d.Pn, d.ArP, d.ArN, d.Ar, static_cast<double>(d.No),
            d.Ima, d.Imi, d.S1, d.S2};
}

}  // namespace ecgid::morph
