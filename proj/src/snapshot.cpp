#include "vpmcf/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace vpmcf {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");
static_assert(sizeof(double) == 8, "snapshot I/O assumes IEEE-754 binary64");

namespace {
constexpr std::uint32_t kVersion = 1;
constexpr char kMagic[4] = {'V', 'P', 'M', 'F'};
constexpr std::size_t kHeaderBytes = 40;
} // namespace

void write_snapshot(const std::string& path, const ScalarField& phi, double eps, double t) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("write_snapshot: cannot open " + path);
    char header[kHeaderBytes] = {};
    std::memcpy(header, kMagic, 4);
    const std::uint32_t version = kVersion;
    const std::uint32_t d = static_cast<std::uint32_t>(phi.grid.d);
    const std::uint32_t n = static_cast<std::uint32_t>(phi.grid.n);
    std::memcpy(header + 4, &version, 4);
    std::memcpy(header + 8, &d, 4);
    std::memcpy(header + 12, &n, 4);
    std::memcpy(header + 16, &eps, 8);
    std::memcpy(header + 24, &t, 8);
    out.write(header, kHeaderBytes);
    out.write(reinterpret_cast<const char*>(phi.v.data()),
              static_cast<std::streamsize>(phi.v.size() * sizeof(double)));
    if (!out) throw ValidationError("write_snapshot: short write to " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("read_snapshot: cannot open " + path);
    char header[kHeaderBytes];
    in.read(header, kHeaderBytes);
    if (!in) throw ValidationError("read_snapshot: truncated header in " + path);
    if (std::memcmp(header, kMagic, 4) != 0)
        throw ValidationError("read_snapshot: bad magic in " + path);
    std::uint32_t version = 0, d = 0, n = 0;
    std::memcpy(&version, header + 4, 4);
    std::memcpy(&d, header + 8, 4);
    std::memcpy(&n, header + 12, 4);
    if (version != kVersion) throw ValidationError("read_snapshot: unsupported version");
    Snapshot snap;
    std::memcpy(&snap.eps, header + 16, 8);
    std::memcpy(&snap.t, header + 24, 8);
    snap.phi = ScalarField(GridSpec::make(static_cast<int>(d), static_cast<int>(n)));
    in.read(reinterpret_cast<char*>(snap.phi.v.data()),
            static_cast<std::streamsize>(snap.phi.v.size() * sizeof(double)));
    if (!in) throw ValidationError("read_snapshot: truncated payload in " + path);
    return snap;
}

} // namespace vpmcf
