#include "ecgid/wfdb.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ecgid {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_double(const std::string& token, const std::string& what) {
    double v = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw DataError("expected a number for " + what + ", got '" + token + "'");
    return v;
}

long parse_long(const std::string& token, const std::string& what) {
    long v = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw DataError("expected an integer for " + what + ", got '" + token + "'");
    return v;
}

}  // namespace ecgid

namespace ecgid::wfdb {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;  // blank
}

int sign_extend_12(int v) {
    v &= 0xFFF;
    return (v & 0x800) ? v - 4096 : v;
}

// Signal-spec line: FILE FORMAT [GAIN[(BASELINE)][/UNITS] [ADCRES [ADCZERO ...]]]
SignalSpec parse_signal_line(const std::string& line) {
    SignalSpec spec;
    auto toks = tokenize(line);
    if (toks.size() < 2) throw DataError("malformed signal line: '" + line + "'");
    spec.file_name = toks[0];

    // Format may carry xSAMPLES / :SKEW / +OFFSET suffixes; only plain 212
    // frames are supported.
    const std::string& fmt = toks[1];
    size_t pos = fmt.find_first_of("x:+");
    spec.format_code = static_cast<int>(parse_long(fmt.substr(0, pos), "format code"));
    if (spec.format_code != 212)
        throw DataError("unsupported signal format " + std::to_string(spec.format_code) +
                        " (only format 212 is supported)");
    if (pos != std::string::npos)
        throw DataError("unsupported format modifier in '" + fmt + "'");

    bool have_baseline = false;
    if (toks.size() > 2) {
        // GAIN[(BASELINE)][/UNITS]
        std::string g = toks[2];
        if (size_t slash = g.find('/'); slash != std::string::npos) g = g.substr(0, slash);
        if (size_t open = g.find('('); open != std::string::npos) {
            size_t close = g.find(')', open);
            if (close == std::string::npos)
                throw DataError("unbalanced baseline parentheses in '" + toks[2] + "'");
            spec.baseline =
                static_cast<int>(parse_long(g.substr(open + 1, close - open - 1), "baseline"));
            have_baseline = true;
            g = g.substr(0, open);
        }
        spec.gain = g.empty() ? 0.0 : parse_double(g, "gain");
    }
    if (spec.gain == 0.0) spec.gain = 200.0;  // WFDB default

    if (toks.size() > 4) spec.adc_zero = static_cast<int>(parse_long(toks[4], "ADC zero"));
    if (!have_baseline) spec.baseline = spec.adc_zero;

    if (toks.size() > 8) {
        std::string desc;
        for (size_t i = 8; i < toks.size(); ++i) {
            if (!desc.empty()) desc += ' ';
            desc += toks[i];
        }
        spec.description = desc;
    }
    return spec;
}

}  // namespace

std::vector<double> SignalRecord::channel_mv(int ch) const {
    const auto& sig = header.signals.at(static_cast<size_t>(ch));
    const auto& raw = channels.at(static_cast<size_t>(ch));
    std::vector<double> mv(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) mv[i] = (raw[i] - sig.baseline) / sig.gain;
    return mv;
}

RecordHeader parse_header(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!is_comment_or_blank(line)) lines.push_back(line);
    }
    if (lines.empty()) throw DataError("empty header");

    RecordHeader header;
    auto toks = tokenize(lines[0]);
    if (toks.size() < 2) throw DataError("malformed record line: '" + lines[0] + "'");
    header.record_name = toks[0];
    if (header.record_name.find('/') != std::string::npos)
        throw DataError("multi-segment records are not supported");
    header.n_signals = static_cast<int>(parse_long(toks[1], "signal count"));
    if (header.n_signals < 1)
        throw DataError("record declares " + std::to_string(header.n_signals) + " signals");
    if (toks.size() > 2) {
        // Sampling rate may carry a /counter suffix.
        std::string fs = toks[2];
        if (size_t slash = fs.find('/'); slash != std::string::npos) fs = fs.substr(0, slash);
        header.sampling_rate = parse_double(fs, "sampling rate");
    } else {
        header.sampling_rate = 250.0;  // WFDB default
    }
    if (header.sampling_rate <= 0) throw DataError("sampling rate must be positive");
    if (toks.size() > 3) header.n_samples = parse_long(toks[3], "sample count");
    if (header.n_samples < 0) throw DataError("negative sample count");

    if (lines.size() - 1 != static_cast<size_t>(header.n_signals))
        throw DataError("header declares " + std::to_string(header.n_signals) +
                        " signals but has " + std::to_string(lines.size() - 1) +
                        " signal lines");
    for (int s = 0; s < header.n_signals; ++s)
        header.signals.push_back(parse_signal_line(lines[static_cast<size_t>(s) + 1]));
    return header;
}

std::vector<std::vector<int>> decode_212(std::span<const std::uint8_t> bytes,
                                         long n_samples, int n_signals) {
    if (n_signals != 1 && n_signals != 2)
        throw DataError("format 212 decoder supports 1 or 2 signals, got " +
                        std::to_string(n_signals));
    const long total = n_samples * n_signals;
    const long needed = (total * 3 + 1) / 2;
    if (static_cast<long>(bytes.size()) < needed)
        throw DataError("truncated 212 stream: need " + std::to_string(needed) +
                        " bytes, have " + std::to_string(bytes.size()));

    std::vector<std::vector<int>> channels(static_cast<size_t>(n_signals));
    for (auto& ch : channels) ch.reserve(static_cast<size_t>(n_samples));

    long emitted = 0;
    size_t pos = 0;
    while (emitted < total) {
        const int b0 = bytes[pos], b1 = bytes[pos + 1], b2 = bytes[pos + 2];
        pos += 3;
        const int s1 = sign_extend_12(((b1 & 0x0F) << 8) | b0);
        const int s2 = sign_extend_12(((b1 & 0xF0) << 4) | b2);
        channels[static_cast<size_t>(emitted % n_signals)].push_back(s1);
        ++emitted;
        if (emitted < total) {
            channels[static_cast<size_t>(emitted % n_signals)].push_back(s2);
            ++emitted;
        }
    }
    return channels;
}

bool is_beat_code(int code) { return (code >= 1 && code <= 13) || code == 34 || code == 38; }

AnnotationSet read_annotations(std::span<const std::uint8_t> bytes) {
    // Pseudo-annotation codes of the MIT format.
    constexpr int SKIP = 59, NUM = 60, SUB = 61, CHN = 62, AUX = 63;

    AnnotationSet set;
    set.provenance = Provenance::file;
    long time = 0;
    int chan = 0;
    size_t pos = 0;
    for (;;) {
        if (pos + 2 > bytes.size()) throw DataError("annotation stream ends before EOF word");
        const unsigned word =
            static_cast<unsigned>(bytes[pos]) | (static_cast<unsigned>(bytes[pos + 1]) << 8);
        pos += 2;
        if (word == 0) break;  // EOF
        const int code = static_cast<int>(word >> 10);
        const long delta = static_cast<long>(word & 0x3FF);
        switch (code) {
            case SKIP: {
                // 4-byte signed interval, PDP-11 order: high word first,
                // each word little-endian. Adds to the next annotation's time.
                if (pos + 4 > bytes.size())
                    throw DataError("annotation stream ends inside a SKIP interval");
                const std::uint32_t hi =
                    static_cast<std::uint32_t>(bytes[pos]) |
                    (static_cast<std::uint32_t>(bytes[pos + 1]) << 8);
                const std::uint32_t lo =
                    static_cast<std::uint32_t>(bytes[pos + 2]) |
                    (static_cast<std::uint32_t>(bytes[pos + 3]) << 8);
                pos += 4;
                time += static_cast<std::int32_t>((hi << 16) | lo);
                break;
            }
            case NUM:
            case SUB:
                break;  // stateful in full readers; nothing downstream uses them
            case CHN:
                chan = static_cast<int>(delta);
                break;
            case AUX:
                pos += static_cast<size_t>(delta + (delta & 1));  // payload padded to even
                if (pos > bytes.size())
                    throw DataError("annotation stream ends inside an AUX payload");
                break;
            default:
                time += delta;
                if (code != 0)  // code 0 with nonzero delta: time advance only
                    set.items.push_back({time, code, chan});
                break;
        }
    }
    return set;
}

AnnotationSet bind_beats(const AnnotationSet& anns, const RecordHeader& header) {
    AnnotationSet beats;
    beats.provenance = anns.provenance;
    for (const auto& a : anns.items) {
        if (!is_beat_code(a.type)) continue;
        if (!beats.items.empty() && a.sample <= beats.items.back().sample)
            throw DataError("beat annotations are not strictly increasing near sample " +
                            std::to_string(a.sample));
        if (a.sample < 0 || a.sample >= header.n_samples)
            throw DataError("beat annotation at sample " + std::to_string(a.sample) +
                            " lies outside the record (" + std::to_string(header.n_samples) +
                            " samples)");
        beats.items.push_back(a);
    }
    return beats;
}

std::pair<SignalRecord, AnnotationSet> load_csv(const std::string& text,
                                                const std::string& record_name,
                                                double default_fs) {
    std::istringstream in(text);
    std::string line;
    double fs = default_fs;

    // Optional leading `# key=value` lines.
    std::string header_line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
                if (key == "fs") fs = parse_double(line.substr(eq + 1), "fs");
            }
            continue;
        }
        header_line = line;
        break;
    }
    if (header_line.empty()) throw DataError("CSV has no header row");

    std::vector<std::string> cols;
    {
        std::istringstream hs(header_line);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    if (cols.size() < 2 || cols[0] != "sample" || cols[1] != "mv" ||
        (cols.size() == 3 && cols[2] != "r_peak") || cols.size() > 3)
        throw DataError("CSV header must be sample,mv[,r_peak], got '" + header_line + "'");
    const bool has_peaks = cols.size() == 3;

    std::vector<double> mv;
    std::vector<long> peaks;
    long row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != cols.size())
            throw DataError("CSV row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(cols.size()));
        const long sample = parse_long(cells[0], "sample index");
        if (sample != row)
            throw DataError("CSV sample column must be consecutive from 0; row " +
                            std::to_string(row) + " says " + std::to_string(sample));
        mv.push_back(parse_double(cells[1], "mv"));
        if (has_peaks) {
            const long flag = parse_long(cells[2], "r_peak flag");
            if (flag != 0 && flag != 1)
                throw DataError("r_peak flag must be 0 or 1, got " + std::to_string(flag));
            if (flag) peaks.push_back(row);
        }
        ++row;
    }
    if (mv.empty()) throw DataError("CSV has no data rows (zero-length record)");

    SignalRecord rec;
    rec.header.record_name = record_name;
    rec.header.n_signals = 1;
    rec.header.sampling_rate = fs;
    rec.header.n_samples = static_cast<long>(mv.size());
    SignalSpec spec;
    spec.file_name = record_name + ".csv";
    spec.gain = 1.0;
    spec.baseline = 0;
    spec.description = "csv";
    rec.header.signals.push_back(spec);
    rec.channels.push_back(std::move(mv));

    AnnotationSet anns;
    anns.provenance = Provenance::csv;
    for (long p : peaks) anns.items.push_back({p, 1, 0});
    return {std::move(rec), std::move(anns)};
}

namespace {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

}  // namespace

SignalRecord read_record(const std::filesystem::path& stem) {
    auto hea = stem;
    hea += ".hea";
    std::ifstream in(hea);
    if (!in) throw DataError("cannot open header " + hea.string());
    std::stringstream buf;
    buf << in.rdbuf();
    auto header = parse_header(buf.str());

    for (const auto& s : header.signals)
        if (s.file_name != header.signals[0].file_name)
            throw DataError("signals split across multiple .dat files are not supported");

    auto dat = stem.parent_path() / header.signals[0].file_name;
    auto bytes = read_file_bytes(dat);
    long n_samples = header.n_samples;
    if (n_samples == 0) {
        n_samples = static_cast<long>(bytes.size()) * 2 / 3 / header.n_signals;
        header.n_samples = n_samples;
    }
    auto channels = decode_212(bytes, n_samples, header.n_signals);

    SignalRecord rec;
    rec.header = std::move(header);
    for (auto& ch : channels)
        rec.channels.emplace_back(ch.begin(), ch.end());
    return rec;
}

AnnotationSet read_annotation_file(const std::filesystem::path& atr_path) {
    auto bytes = read_file_bytes(atr_path);
    return read_annotations(bytes);
}

}  // namespace ecgid::wfdb
