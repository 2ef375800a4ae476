#ifndef ECGID_MORPH_HPP
#define ECGID_MORPH_HPP

#include <array>
#include <span>

namespace ecgid::morph {

// The ten QS-window shape descriptors. Amplitudes in mV, areas in
// mV*sample, intervals in ms from window onset, slopes in mV/ms.
struct MorphDescriptors {
    double Pp = 0;   // dominant positive amplitude (0 if none positive)
    double Pn = 0;   // dominant negative amplitude (0 if none negative)
    double ArP = 0;  // sum of positive samples
    double ArN = 0;  // |sum of negative samples|
    double Ar = 0;   // ArP + ArN
    int No = 0;      // samples with |x| above 70% of the dominant peak
    double Ima = 0;  // onset -> positive-peak interval
    double Imi = 0;  // onset -> negative-peak interval
    double S1 = 0;   // onset -> first peak slope
    double S2 = 0;   // first peak -> second peak slope
};

inline constexpr std::array<const char*, 10> kColumns = {
    "Pp", "Pn", "ArP", "ArN", "Ar", "No", "Ima", "Imi", "S1", "S2"};

MorphDescriptors compute_descriptors(std::span<const double> qs_window, double fs);

std::array<double, 10> to_row(const MorphDescriptors& d);

}  // namespace ecgid::morph

#endif
