#include "osvd/io.hpp"

#include "osvd/errors.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <system_error>
#include <unistd.h>

namespace osvd {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'O', 'T', '3', '\0'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::uint8_t* out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out[b] = static_cast<std::uint8_t>(v >> (8 * b));
}

std::uint32_t get_u32(const std::uint8_t* in) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[b]) << (8 * b);
    return v;
}

void put_f64(std::uint8_t* out, double x) {
    const auto v = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) out[b] = static_cast<std::uint8_t>(v >> (8 * b));
}

double get_f64(const std::uint8_t* in) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[b]) << (8 * b);
    return std::bit_cast<double>(v);
}

std::vector<std::uint8_t> read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading " + path.string());
    return bytes;
}

Tensor3 matrix_as_tensor(const Matrix& m) {
    return Tensor3(Dims{m.rows(), m.cols(), 1}, std::vector<double>(m.data(), m.data() + m.size()));
}

} // namespace

std::vector<std::uint8_t> encode_ot3(const Tensor3& t) {
    for (Index d : t.dims()) {
        if (d > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("OT3: dimension exceeds uint32");
    }
    std::vector<std::uint8_t> out(kHeaderBytes + 8 * static_cast<std::size_t>(t.size()));
    std::memcpy(out.data(), kMagic.data(), kMagic.size());
    for (int m = 0; m < 3; ++m) put_u32(out.data() + 4 + 4 * m, static_cast<std::uint32_t>(t.dims()[static_cast<std::size_t>(m)]));
    std::uint8_t* p = out.data() + kHeaderBytes;
    for (double x : t.data()) {
        put_f64(p, x);
        p += 8;
    }
    return out;
}

Tensor3 decode_ot3(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderBytes) throw IoError("OT3: truncated header");
    if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) throw IoError("OT3: bad magic");
    Dims dims{};
    std::size_t count = 1;
    for (int m = 0; m < 3; ++m) {
        const std::uint32_t d = get_u32(bytes.data() + 4 + 4 * m);
        if (d == 0) throw IoError("OT3: zero dimension");
        dims[static_cast<std::size_t>(m)] = static_cast<Index>(d);
        count *= d;
    }
    if (bytes.size() - kHeaderBytes != 8 * count) {
        throw IoError("OT3: payload holds " + std::to_string((bytes.size() - kHeaderBytes) / 8) +
                      " values, header declares " + std::to_string(count));
    }
    std::vector<double> data(count);
    const std::uint8_t* p = bytes.data() + kHeaderBytes;
    for (std::size_t i = 0; i < count; ++i, p += 8) data[i] = get_f64(p);
    try {
        return Tensor3(dims, std::move(data));
    } catch (const ValidationError& e) {
        throw IoError(std::string("OT3: ") + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
    const auto bytes = read_binary(path);
    return std::string(bytes.begin(), bytes.end());
}

void write_ot3(const Tensor3& t, const std::filesystem::path& path) { write_file_atomic(path, encode_ot3(t)); }

Tensor3 read_ot3(const std::filesystem::path& path) {
    const auto bytes = read_binary(path);
    try {
        return decode_ot3(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void save_factors(const OsvdFactors& f, const std::filesystem::path& dir, const std::string& extra_json) {
    validate(f);
    nlohmann::json extra = nullptr;
    if (!extra_json.empty()) {
        try {
            extra = nlohmann::json::parse(extra_json);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("factor manifest extra is not valid JSON: ") + e.what());
        }
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string());

    write_ot3(matrix_as_tensor(f.u3), dir / "u3.ot3");
    write_ot3(f.ufaces, dir / "ufaces.ot3");
    write_ot3(f.sfaces, dir / "sfaces.ot3");
    write_ot3(f.vfaces, dir / "vfaces.ot3");

    const Dims d = f.dims();
    nlohmann::json manifest{
        {"format", "osvd-factors"},
        {"version", 1},
        {"dims", {d[0], d[1], d[2]}},
        {"k1", f.k1()},
        {"k2", f.k2},
        {"sigma3", std::vector<double>(f.sigma3.data(), f.sigma3.data() + f.sigma3.size())},
        {"files", {{"u3", "u3.ot3"}, {"ufaces", "ufaces.ot3"}, {"sfaces", "sfaces.ot3"}, {"vfaces", "vfaces.ot3"}}},
        {"warnings", f.warnings},
        {"extra", extra},
    };
    write_file_atomic(dir / kFactorManifestName, manifest.dump(2) + "\n");
}

OsvdFactors load_factors(const std::filesystem::path& dir) {
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_text_file(dir / kFactorManifestName));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("factor manifest " + (dir / kFactorManifestName).string() + ": " + e.what());
    }
    OsvdFactors f;
    try {
        if (manifest.at("format") != "osvd-factors") throw IoError("not an osvd-factors manifest");
        const auto files = manifest.at("files");
        const Tensor3 u3 = read_ot3(dir / files.at("u3").get<std::string>());
        f.u3 = Eigen::Map<const Matrix>(u3.data().data(), u3.dim(1), u3.dim(2));
        f.ufaces = read_ot3(dir / files.at("ufaces").get<std::string>());
        f.sfaces = read_ot3(dir / files.at("sfaces").get<std::string>());
        f.vfaces = read_ot3(dir / files.at("vfaces").get<std::string>());
        f.k2 = manifest.at("k2").get<std::vector<Index>>();
        const auto sigma = manifest.at("sigma3").get<std::vector<double>>();
        f.sigma3 = Eigen::Map<const Vector>(sigma.data(), static_cast<Index>(sigma.size()));
        if (manifest.contains("warnings")) f.warnings = manifest["warnings"].get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("factor manifest " + (dir / kFactorManifestName).string() + ": " + e.what());
    }
    try {
        validate(f);
    } catch (const ValidationError& e) {
        throw IoError(dir.string() + ": " + e.what());
    }
    return f;
}

std::string load_factor_extra(const std::filesystem::path& dir) {
    try {
        const auto manifest = nlohmann::json::parse(read_text_file(dir / kFactorManifestName));
        return manifest.value("extra", nlohmann::json(nullptr)).dump();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("factor manifest " + (dir / kFactorManifestName).string() + ": " + e.what());
    }
}

} // namespace osvd
