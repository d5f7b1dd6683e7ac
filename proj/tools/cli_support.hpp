#pragma once

#include "osvd/osvd.h"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unistd.h>
#include <vector>

namespace cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4, kInternal = 5 };

// Error carrying the process exit code.
class Failure : public std::runtime_error {
public:
    Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

inline void check(osvd_status s) {
    if (s != OSVD_OK) throw Failure(static_cast<int>(s), osvd_last_error());
}

[[noreturn]] inline void invalid(const std::string& what) { throw Failure(kValidation, what); }

struct TensorDeleter {
    void operator()(osvd_tensor* t) const noexcept { osvd_tensor_free(t); }
};
struct FactorsDeleter {
    void operator()(osvd_factors* f) const noexcept { osvd_factors_free(f); }
};
using Tensor = std::unique_ptr<osvd_tensor, TensorDeleter>;
using Factors = std::unique_ptr<osvd_factors, FactorsDeleter>;

inline Tensor load_tensor(const std::string& path) {
    osvd_tensor* t = nullptr;
    check(osvd_tensor_load(path.c_str(), &t));
    return Tensor(t);
}

inline std::vector<size_t> tensor_dims(const osvd_tensor* t) {
    size_t d[3];
    osvd_tensor_dims(t, d);
    return {d[0], d[1], d[2]};
}

inline std::vector<std::string> factor_warnings(const osvd_factors* f) {
    std::vector<std::string> out;
    for (size_t i = 0; i < osvd_factors_warning_count(f); ++i) out.emplace_back(osvd_factors_warning(f, i));
    return out;
}

inline size_t parse_size(std::string_view text, std::string_view what) {
    size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        invalid("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return v;
}

// "a,b,c" -> {a, b, c}
inline std::vector<size_t> parse_list(std::string_view text, std::string_view what) {
    std::vector<size_t> out;
    size_t start = 0;
    while (true) {
        const size_t comma = text.find(',', start);
        out.push_back(parse_size(text.substr(start, comma - start), what));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// "60x50x40" -> {60, 50, 40}
inline std::vector<size_t> parse_dims(std::string_view text) {
    std::vector<size_t> out;
    size_t start = 0;
    while (true) {
        const size_t x = text.find('x', start);
        out.push_back(parse_size(text.substr(start, x - start), "dimension"));
        if (x == std::string_view::npos) break;
        start = x + 1;
    }
    if (out.size() != 3) invalid("--dims expects I1xI2xI3, got '" + std::string(text) + "'");
    return out;
}

// A scalar broadcasts to k1 entries; a list must have exactly k1.
inline std::vector<size_t> per_face(const std::vector<size_t>& values, size_t k1, std::string_view what) {
    if (values.size() == 1) return std::vector<size_t>(k1, values[0]);
    if (values.size() != k1) {
        invalid(std::string(what) + " lists " + std::to_string(values.size()) + " entries but k1 = " +
                std::to_string(k1));
    }
    return values;
}

inline void write_atomic(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Failure(kIo, "cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Failure(kIo, "failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Failure(kIo, "cannot move " + tmp.string() + " to " + path.string());
    }
}

inline json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Failure(kIo, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Failure(kIo, path.string() + ": " + e.what());
    }
}

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard deviation; zero for a single value.
inline double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace cli
