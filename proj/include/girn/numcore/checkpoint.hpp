#pragma once
// Flat binary parameter container.
//
// Layout (all integers little-endian):
//   magic   8 bytes  "GIRNCKPT"
//   version u32      currently 1
//   count   u32      number of parameter blocks
// then per block:
//   name_len u32, name bytes (UTF-8, no terminator)
//   rank     u32, dims u64 x rank
//   values   f64 x prod(dims), IEEE-754 binary64 little-endian

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "girn/numcore/params.hpp"

namespace girn::num {

struct ParamBlock {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_f64(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

class Reader {
 public:
  Reader(const char* data, std::size_t n) : p_(data), end_(data + n) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p_[i])) << (8 * i);
    p_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p_[i])) << (8 * i);
    p_ += 8;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s(p_, n);
    p_ += n;
    return s;
  }
  bool done() const { return p_ == end_; }

 private:
  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end_ - p_) < n) {
      throw std::runtime_error("checkpoint: truncated file");
    }
  }
  const char* p_;
  const char* end_;
};

}  // namespace detail

inline constexpr char kCheckpointMagic[9] = "GIRNCKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::string encode_checkpoint(const std::vector<ParamRef>& refs) {
  validate_refs(refs);
  std::string out;
  out.append(kCheckpointMagic, 8);
  detail::put_u32(out, kCheckpointVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(refs.size()));
  for (const ParamRef& r : refs) {
    detail::put_u32(out, static_cast<std::uint32_t>(r.name.size()));
    out.append(r.name);
    detail::put_u32(out, static_cast<std::uint32_t>(r.shape.size()));
    for (std::size_t d : r.shape) detail::put_u64(out, d);
    for (double v : *r.values) detail::put_f64(out, v);
  }
  return out;
}

inline void save_checkpoint(const std::string& path, const std::vector<ParamRef>& refs) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
  const std::string blob = encode_checkpoint(refs);
  f.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!f) throw std::runtime_error("checkpoint: write failed: " + path);
}

inline std::vector<ParamBlock> decode_checkpoint(const std::string& blob) {
  detail::Reader rd(blob.data(), blob.size());
  if (rd.bytes(8) != std::string(kCheckpointMagic, 8)) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  const std::uint32_t version = rd.u32();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = rd.u32();
  std::vector<ParamBlock> blocks(count);
  for (ParamBlock& b : blocks) {
    b.name = rd.bytes(rd.u32());
    const std::uint32_t rank = rd.u32();
    b.shape.resize(rank);
    std::size_t n = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      b.shape[i] = static_cast<std::size_t>(rd.u64());
      n *= b.shape[i];
    }
    b.values.resize(n);
    for (double& v : b.values) v = rd.f64();
  }
  if (!rd.done()) throw std::runtime_error("checkpoint: trailing bytes");
  return blocks;
}

inline std::vector<ParamBlock> load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("checkpoint: cannot open: " + path);
  std::string blob((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_checkpoint(blob);
}

// Copies loaded blocks into matching refs by name. With require_all, every
// ref must be present in the loaded set.
inline void apply_blocks(const std::vector<ParamRef>& refs,
                         const std::vector<ParamBlock>& blocks, bool require_all = true) {
  for (const ParamRef& r : refs) {
    const ParamBlock* found = nullptr;
    for (const ParamBlock& b : blocks) {
      if (b.name == r.name) {
        found = &b;
        break;
      }
    }
    if (!found) {
      if (require_all) throw std::runtime_error("checkpoint: missing block '" + r.name + "'");
      continue;
    }
    if (found->shape != r.shape) {
      throw std::runtime_error("checkpoint: shape mismatch for block '" + r.name + "'");
    }
    *r.values = found->values;
  }
}

}  // namespace girn::num
