#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "cyclosense/error.hpp"
#include "cyclosense/harness.hpp"

namespace cyclosense {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

class LineParser {
public:
    LineParser(std::size_t line, std::string key) : line_(line), key_(std::move(key)) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("scenario line " + std::to_string(line_) + " (" + key_ + "): " + what);
    }

    double real(const std::string& v) const {
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size()) fail("expected a number, got '" + v + "'");
        return out;
    }

    std::uint64_t count(const std::string& v) const {
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size()) fail("expected a non-negative integer, got '" + v + "'");
        return out;
    }

    std::vector<double> list(const std::string& v) const {
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(real(trim(item)));
        if (out.empty()) fail("empty list");
        return out;
    }

private:
    std::size_t line_;
    std::string key_;
};

}  // namespace

Scenario parse_scenario(const std::string& text, Scenario s) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("scenario line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const LineParser p(line_no, key);

        if (key == "snr_db") {
            s.snr_db = p.real(value);
        } else if (key == "n_users") {
            s.n_users = p.count(value);
        } else if (key == "n_trials") {
            s.n_trials = p.count(value);
        } else if (key == "base_seed" || key == "seed") {
            s.base_seed = p.count(value);
        } else if (key == "window_len") {
            s.detector.window_len = p.count(value);
        } else if (key == "overlap_fraction") {
            s.detector.overlap_fraction = p.real(value);
        } else if (key == "peak_neighborhood") {
            s.detector.peak_neighborhood = p.count(value);
        } else if (key == "alpha_set") {
            const std::string mode = lower(value);
            if (mode == "targeted") {
                s.detector.alpha_set.clear();
            } else if (mode == "full") {
                s.detector.alpha_set = full_alpha_grid(s.detector.window_len);
            } else {
                s.detector.alpha_set = p.list(value);
            }
        } else if (key == "n_subcarriers") {
            s.ofdm.n_subcarriers = p.count(value);
        } else if (key == "n_symbols") {
            s.ofdm.n_symbols = p.count(value);
        } else if (key == "guard_fraction") {
            s.ofdm.guard_fraction = p.real(value);
        } else if (key == "carrier_fc") {
            s.ofdm.carrier_fc = p.real(value);
        } else if (key == "subcarrier_bw") {
            s.ofdm.subcarrier_bw = p.real(value);
        } else if (key == "fusion_rule") {
            s.fusion_rule = FusionRule::parse(value);
        } else if (key == "threshold_grid") {
            const std::string mode = lower(value);
            if (mode == "auto") {
                s.threshold_grid = ThresholdGrid{};
            } else if (mode.rfind("auto:", 0) == 0) {
                s.threshold_grid = ThresholdGrid{{}, p.count(mode.substr(5))};
            } else {
                s.threshold_grid.values = p.list(value);
            }
        } else {
            p.fail("unknown key");
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, Scenario base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), std::move(base));
}

}  // namespace cyclosense
