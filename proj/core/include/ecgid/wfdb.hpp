#ifndef ECGID_WFDB_HPP
#define ECGID_WFDB_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ecgid/common.hpp"

namespace ecgid::wfdb {

struct SignalSpec {
    std::string file_name;
    int format_code = 212;
    double gain = 200.0;  // ADC units per millivolt
    int baseline = 0;     // ADC units
    int adc_zero = 0;
    std::string description;
};

struct RecordHeader {
    std::string record_name;
    int n_signals = 0;
    double sampling_rate = 0.0;  // Hz
    long n_samples = 0;          // per signal
    std::vector<SignalSpec> signals;
};

enum class Provenance { file, csv, synthetic };

struct Annotation {
    long sample = 0;
    int type = 0;
    int channel = 0;
};

struct AnnotationSet {
    std::vector<Annotation> items;
    Provenance provenance = Provenance::file;
};

struct SignalRecord {
    RecordHeader header;
    // ADC units. Values decoded from format 212 are exact 12-bit integers;
    // the CSV path stores millivolts directly at gain 1, baseline 0.
    std::vector<std::vector<double>> channels;

    double millivolts(int ch, long i) const {
        const auto& s = header.signals.at(static_cast<size_t>(ch));
        return (channels[static_cast<size_t>(ch)][static_cast<size_t>(i)] - s.baseline) / s.gain;
    }
    /// Whole channel converted to millivolts.
    std::vector<double> channel_mv(int ch) const;
};

/// Parse the text of a .hea file. Comment lines start with '#'.
/// Missing gain (or gain 0) defaults to 200 ADC/mV; baseline defaults to the
/// parenthesized value after the gain, then the ADC-zero field, then 0.
RecordHeader parse_header(const std::string& text);

/// Unpack format-212 bytes: each 3-byte group holds two 12-bit two's
/// complement samples,
///   s1 = sext12(((b1 & 0x0F) << 8) | b0)
///   s2 = sext12(((b1 & 0xF0) << 4) | b2)
/// interleaved across channels in frame order. n_samples is per channel.
std::vector<std::vector<int>> decode_212(std::span<const std::uint8_t> bytes,
                                         long n_samples, int n_signals);

/// Decode a MIT-format annotation stream: 2-byte little-endian words, code in
/// the top 6 bits, time increment in the low 10. Handles the SKIP / NUM /
/// SUB / CHN / AUX pseudo-codes; a zero word terminates. Emits every real
/// annotation (beat filtering happens in bind_beats).
AnnotationSet read_annotations(std::span<const std::uint8_t> bytes);

/// MIT beat-class codes treated as R-peak markers.
bool is_beat_code(int code);

/// Keep beat-class annotations only and validate them against the header:
/// indices must be strictly increasing and inside the record.
AnnotationSet bind_beats(const AnnotationSet& anns, const RecordHeader& header);

/// CSV fallback, schema `sample,mv[,r_peak]`. Leading `# key=value` comment
/// lines may set fs; otherwise default_fs applies. Produces a single-channel
/// record with gain 1, baseline 0.
std::pair<SignalRecord, AnnotationSet> load_csv(const std::string& text,
                                                const std::string& record_name,
                                                double default_fs = 360.0);

/// Read <stem>.hea and <stem>.dat.
SignalRecord read_record(const std::filesystem::path& stem);

/// Read <stem>.atr.
AnnotationSet read_annotation_file(const std::filesystem::path& atr_path);

}  // namespace ecgid::wfdb

#endif
