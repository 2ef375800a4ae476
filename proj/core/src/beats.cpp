#include "ecgid/beats.hpp"

#include <cmath>

#include "ecgid/common.hpp"

namespace ecgid::beats {

namespace {

// Copy [first, last] from the channel, zero-filling outside the record.
std::vector<double> window_with_fill(std::span<const double> channel, long first,
                                     long last, bool* truncated) {
    std::vector<double> out(static_cast<size_t>(last - first + 1), 0.0);
    const long n = static_cast<long>(channel.size());
    bool clipped = false;
    for (long i = first; i <= last; ++i) {
        if (i < 0 || i >= n) {
            clipped = true;
            continue;
        }
        out[static_cast<size_t>(i - first)] = channel[static_cast<size_t>(i)];
    }
    if (truncated) *truncated = clipped;
    return out;
}

}  // namespace

std::vector<double> segment_qs(std::span<const double> channel_mv, long r_index,
                               const WindowSpec& spec, double fs, bool* truncated) {
    const int n_pre = ms_to_samples(spec.pre_r_ms, fs);
    const int n_post = ms_to_samples(spec.post_r_ms, fs);
    // [R - n_pre, R + n_post - 1]: n_pre samples before R, n_post from R on.
    return window_with_fill(channel_mv, r_index - n_pre, r_index + n_post - 1, truncated);
}

std::vector<double> extract_hermite_window(std::span<const double> channel_mv,
                                           long r_index, int M, bool* truncated) {
    return window_with_fill(channel_mv, r_index - M, r_index + M, truncated);
}

std::optional<std::vector<double>> normalize_beat(std::span<const double> raw) {
    const size_t n = raw.size();
    double mean = 0;
    for (double v : raw) mean += v;
    mean /= static_cast<double>(n);

    double norm_sq = 0;
    std::vector<double> centered(n);
    for (size_t i = 0; i < n; ++i) {
        centered[i] = raw[i] - mean;
        norm_sq += centered[i] * centered[i];
    }
    const double norm = std::sqrt(norm_sq);
    if (norm < 1e-12) return std::nullopt;  // constant window
    for (double& v : centered) v /= norm;
    return centered;
}

std::vector<Heartbeat> cut_beats(const wfdb::SignalRecord& record,
                                 const wfdb::AnnotationSet& beat_anns, int channel,
                                 const WindowSpec& spec, const std::string& label) {
    const auto mv = record.channel_mv(channel);
    const double fs = record.header.sampling_rate;

    std::vector<Heartbeat> out;
    out.reserve(beat_anns.items.size());
    int ordinal = 0;
    for (const auto& ann : beat_anns.items) {
        Heartbeat hb;
        hb.subject_label = label;
        hb.beat_ordinal = ordinal++;
        hb.r_index = ann.sample;
        hb.fs = fs;

        bool qs_trunc = false, hw_trunc = false;
        hb.qs_window = segment_qs(mv, ann.sample, spec, fs, &qs_trunc);
        auto raw = extract_hermite_window(mv, ann.sample, spec.hermite_half_width, &hw_trunc);
        hb.truncated = qs_trunc || hw_trunc;

        if (auto normalized = normalize_beat(raw)) {
            hb.hermite_window = std::move(*normalized);
        } else {
            hb.degenerate = true;
        }
        out.push_back(std::move(hb));
    }
    return out;
}

}  // namespace ecgid::beats
