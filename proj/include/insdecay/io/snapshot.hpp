#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "insdecay/solver/flow_state.hpp"

namespace insdecay::io {

// Layout, all little-endian:
//   0  char[8]  "INSSNAP1"
//   8  u32      format version (1)
//  12  u32      header bytes (56)
//  16  u32      n
//  20  u32      field count (3)
//  24  f64      l
//  32  f64      dealias fraction
//  40  f64      t
//  48  u32      flags (bit 0: rho stored as nodal reals)
//  52  u32      reserved (0)
//  56  u1 coefficients, n*n (re, im) f64 pairs, index iy*n + ix
//      u2 coefficients, same layout
//      rho, n*n nodal f64
inline constexpr char kSnapshotMagic[8] = {'I', 'N', 'S', 'S', 'N', 'A', 'P', '1'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::uint32_t kSnapshotHeaderBytes = 56;
inline constexpr std::uint32_t kFlagNodalRho = 1;

namespace detail {

inline void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline void put_f64(std::vector<unsigned char>& b, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}
inline double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const FlowState& s) {
  const Grid& g = s.grid();
  std::vector<unsigned char> b;
  b.reserve(kSnapshotHeaderBytes + g.size() * 40);
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(kSnapshotMagic[i]));
  detail::put_u32(b, kSnapshotVersion);
  detail::put_u32(b, kSnapshotHeaderBytes);
  detail::put_u32(b, static_cast<std::uint32_t>(g.n()));
  detail::put_u32(b, 3);
  detail::put_f64(b, g.l());
  detail::put_f64(b, g.dealias_fraction());
  detail::put_f64(b, s.t);
  detail::put_u32(b, kFlagNodalRho);
  detail::put_u32(b, 0);
  for (const SpectralField* f : {&s.u.u1(), &s.u.u2()}) {
    for (const cplx& c : f->coeffs()) {
      detail::put_f64(b, c.real());
      detail::put_f64(b, c.imag());
    }
  }
  for (double v : s.rho.nodal()) detail::put_f64(b, v);
  return b;
}

inline FlowState decode_snapshot(const std::vector<unsigned char>& b, const std::string& what) {
  auto fail = [&](const std::string& m) { return Error(what + ": " + m); };
  if (b.size() < kSnapshotHeaderBytes || std::memcmp(b.data(), kSnapshotMagic, 8) != 0) {
    throw fail("not a snapshot file");
  }
  const unsigned char* p = b.data();
  if (detail::get_u32(p + 8) != kSnapshotVersion) throw fail("unsupported version");
  const std::uint32_t header = detail::get_u32(p + 12);
  const int n = static_cast<int>(detail::get_u32(p + 16));
  if (detail::get_u32(p + 20) != 3) throw fail("expected 3 fields");
  const Grid g(n, detail::get_f64(p + 24), detail::get_f64(p + 32));
  const double t = detail::get_f64(p + 40);
  if (!(detail::get_u32(p + 48) & kFlagNodalRho)) throw fail("unsupported density layout");
  const std::size_t need = header + g.size() * (16 + 16 + 8);
  if (b.size() != need) throw fail("size mismatch");
  p += header;
  std::vector<cplx> c1(g.size()), c2(g.size());
  for (auto* c : {&c1, &c2}) {
    for (auto& z : *c) {
      z = cplx(detail::get_f64(p), detail::get_f64(p + 8));
      p += 16;
    }
  }
  NodalField rho(g.size());
  for (auto& v : rho) {
    v = detail::get_f64(p);
    p += 8;
  }
  auto u = VelocityField::from_components(
      SpectralVector(SpectralField(g, std::move(c1)), SpectralField(g, std::move(c2))));
  return FlowState(t, std::move(u), DensityField(g, std::move(rho)));
}

inline void write_snapshot(const std::string& path, const FlowState& s) {
  const auto b = encode_snapshot(s);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  os.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

inline FlowState read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path);
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(is)),
                               std::istreambuf_iterator<char>());
  return decode_snapshot(b, path);
}

}  // namespace insdecay::io
