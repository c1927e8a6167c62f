#include "tfim/spectrum_cache.hpp"

#include <array>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "tfim/errors.hpp"

namespace tfim {
namespace {

constexpr std::array<char, 8> kMagic{'T', 'F', 'I', 'M', 'F', 'L', 'Q', '\0'};

class Writer {
public:
  void u32(std::uint32_t x) { le(x, 4); }
  void u64(std::uint64_t x) { le(x, 8); }
  void f64(double x) { le(std::bit_cast<std::uint64_t>(x), 8); }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  const std::vector<char>& bytes() const noexcept { return bytes_; }

private:
  void le(std::uint64_t x, int width) {
    for (int i = 0; i < width; ++i)
      bytes_.push_back(static_cast<char>((x >> (8 * i)) & 0xFFu));
  }
  std::vector<char> bytes_;
};

class Reader {
public:
  explicit Reader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}
  bool u32(std::uint32_t& x) {
    std::uint64_t y = 0;
    if (!le(y, 4))
      return false;
    x = static_cast<std::uint32_t>(y);
    return true;
  }
  bool u64(std::uint64_t& x) { return le(x, 8); }
  bool f64(double& x) {
    std::uint64_t y = 0;
    if (!le(y, 8))
      return false;
    x = std::bit_cast<double>(y);
    return true;
  }
  bool raw(char* p, std::size_t n) {
    if (pos_ + n > bytes_.size())
      return false;
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
    return true;
  }
  bool at_end() const noexcept { return pos_ == bytes_.size(); }

private:
  bool le(std::uint64_t& x, int width) {
    if (pos_ + static_cast<std::size_t>(width) > bytes_.size())
      return false;
    x = 0;
    for (int i = 0; i < width; ++i)
      x |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return true;
  }
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

// FNV-1a over the little-endian encoding of the key fields.
std::uint64_t fnv1a(const std::vector<char>& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

std::uint64_t spectrum_key(const DriveProtocol& drive, int chain_length, int steps) {
  Writer w;
  w.u32(kSpectrumSchemaVersion);
  w.f64(drive.h);
  w.f64(drive.dh);
  w.f64(drive.omega);
  w.u64(static_cast<std::uint64_t>(chain_length));
  w.u64(static_cast<std::uint64_t>(steps));
  return fnv1a(w.bytes());
}

std::filesystem::path spectrum_cache_file(const std::filesystem::path& dir, const DriveProtocol& drive,
                                          int chain_length, int steps) {
  std::ostringstream name;
  name << "floquet-" << std::hex << std::setw(16) << std::setfill('0')
       << spectrum_key(drive, chain_length, steps) << ".bin";
  return dir / name.str();
}

void write_spectrum(const FloquetSpectrum& spectrum, const std::filesystem::path& file) {
  Writer w;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kSpectrumSchemaVersion);
  w.u32(0);
  w.f64(spectrum.drive.h);
  w.f64(spectrum.drive.dh);
  w.f64(spectrum.drive.omega);
  w.u64(static_cast<std::uint64_t>(spectrum.chain_length));
  w.u64(static_cast<std::uint64_t>(spectrum.steps));
  w.u64(spectrum.modes.size());
  for (const auto& mode : spectrum.modes) {
    w.f64(mode.k);
    w.f64(mode.mu);
    w.f64(mode.period);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        w.f64(mode.propagator(r, c).real());
        w.f64(mode.propagator(r, c).imag());
      }
  }
  w.u64(spectrum.v_group.size());
  for (double v : spectrum.v_group)
    w.f64(v);
  w.f64(spectrum.v_max);

  std::error_code ec;
  if (file.has_parent_path())
    std::filesystem::create_directories(file.parent_path(), ec);
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot write spectrum cache " + tmp.string());
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out)
      throw IoError("short write to spectrum cache " + tmp.string());
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec)
    throw IoError("cannot move spectrum cache into place: " + ec.message());
}

std::optional<FloquetSpectrum> read_spectrum(const std::filesystem::path& file, const DriveProtocol& drive,
                                             int chain_length, int steps) {
  std::ifstream in(file, std::ios::binary);
  if (!in)
    return std::nullopt;
  Reader r(std::vector<char>(std::istreambuf_iterator<char>(in), {}));

  std::array<char, 8> magic{};
  std::uint32_t version = 0, reserved = 0;
  if (!r.raw(magic.data(), magic.size()) || magic != kMagic || !r.u32(version) ||
      version != kSpectrumSchemaVersion || !r.u32(reserved))
    return std::nullopt;

  FloquetSpectrum spec;
  std::uint64_t n = 0, st = 0, count = 0;
  if (!r.f64(spec.drive.h) || !r.f64(spec.drive.dh) || !r.f64(spec.drive.omega) || !r.u64(n) || !r.u64(st) ||
      !r.u64(count))
    return std::nullopt;
  // parameter echo must match bit for bit
  if (std::bit_cast<std::uint64_t>(spec.drive.h) != std::bit_cast<std::uint64_t>(drive.h) ||
      std::bit_cast<std::uint64_t>(spec.drive.dh) != std::bit_cast<std::uint64_t>(drive.dh) ||
      std::bit_cast<std::uint64_t>(spec.drive.omega) != std::bit_cast<std::uint64_t>(drive.omega) ||
      n != static_cast<std::uint64_t>(chain_length) || st != static_cast<std::uint64_t>(steps) ||
      count != n / 2)
    return std::nullopt;
  spec.chain_length = chain_length;
  spec.steps = steps;
  spec.modes.resize(count);
  for (auto& mode : spec.modes) {
    if (!r.f64(mode.k) || !r.f64(mode.mu) || !r.f64(mode.period))
      return std::nullopt;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double re = 0.0, im = 0.0;
        if (!r.f64(re) || !r.f64(im))
          return std::nullopt;
        mode.propagator(i, j) = complex(re, im);
      }
  }
  std::uint64_t vcount = 0;
  if (!r.u64(vcount) || vcount > count)
    return std::nullopt;
  spec.v_group.resize(vcount);
  for (auto& v : spec.v_group)
    if (!r.f64(v))
      return std::nullopt;
  if (!r.f64(spec.v_max) || !r.at_end())
    return std::nullopt;
  return spec;
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* dir = std::getenv(kCacheDirEnv);
  if (dir == nullptr || *dir == '\0')
    return std::nullopt;
  return std::filesystem::path(dir);
}

FloquetSpectrum cached_floquet_spectrum(const DriveProtocol& drive, const MomentumGrid& grid, int steps,
                                        const std::optional<std::filesystem::path>& dir) {
  if (!dir)
    return floquet_spectrum(drive, grid, steps);
  const auto file = spectrum_cache_file(*dir, drive, grid.chain_length(), steps);
  if (auto hit = read_spectrum(file, drive, grid.chain_length(), steps))
    return std::move(*hit);
  auto spec = floquet_spectrum(drive, grid, steps);
  write_spectrum(spec, file);
  return spec;
}

}  // namespace tfim
