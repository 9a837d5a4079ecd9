#pragma once
// Named views over trainable parameter blocks. Everything that updates or
// serializes parameters (Adam, checkpoints, tape binding, finite-difference
// probes) works through an ordered ParamRef list.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace girn::num {

struct ParamRef {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double>* values = nullptr;

  std::size_t size() const {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
  }
};

inline std::size_t total_size(const std::vector<ParamRef>& refs) {
  std::size_t n = 0;
  for (const ParamRef& r : refs) n += r.size();
  return n;
}

inline void validate_refs(const std::vector<ParamRef>& refs) {
  for (const ParamRef& r : refs) {
    if (r.values == nullptr || r.values->size() != r.size()) {
      throw std::logic_error("ParamRef '" + r.name + "': storage does not match shape");
    }
  }
}

// Flattens all blocks, in order, into one vector.
inline std::vector<double> flatten(const std::vector<ParamRef>& refs) {
  std::vector<double> out;
  out.reserve(total_size(refs));
  for (const ParamRef& r : refs) out.insert(out.end(), r.values->begin(), r.values->end());
  return out;
}

inline void unflatten(const std::vector<ParamRef>& refs, const std::vector<double>& flat) {
  if (flat.size() != total_size(refs)) {
    throw std::invalid_argument("unflatten: size mismatch");
  }
  std::size_t off = 0;
  for (const ParamRef& r : refs) {
    std::copy(flat.begin() + off, flat.begin() + off + r.size(), r.values->begin());
    off += r.size();
  }
}

}  // namespace girn::num
