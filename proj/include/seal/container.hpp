// Copyright 2026 The sealwm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEAL_CONTAINER_HPP
#define SEAL_CONTAINER_HPP

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "seal/error.hpp"
#include "seal/matrix.hpp"

namespace seal {

inline constexpr char kContainerMagic[9] = "SEALWT01";

/// One named tensor inside a container. role is one of
/// public | private | passport | base.
struct ContainerTensor {
  std::string name;
  std::string role;
  Matrix matrix;
};

namespace detail {

inline void push_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

inline std::uint64_t read_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline void push_f64_le(std::string& out, double d) {
  push_u64_le(out, std::bit_cast<std::uint64_t>(d));
}

inline double read_f64_le(const unsigned char* p) {
  return std::bit_cast<double>(read_u64_le(p));
}

inline bool valid_role(const std::string& role) {
  return role == "public" || role == "private" || role == "passport" ||
         role == "base";
}

}  // namespace detail

/// Bit-exact tensor container: 8-byte magic, 8-byte little-endian header
/// length, UTF-8 JSON header, then concatenated row-major little-endian f64
/// payload. Write then read round trips byte-identically.
class TensorContainer {
 public:
  std::string role = "public";      // container-level role
  nlohmann::json metadata = nlohmann::json::object();

  void add(std::string name, Matrix m, std::string tensor_role = "") {
    if (tensor_role.empty()) tensor_role = role;
    if (!detail::valid_role(tensor_role))
      throw RoleError("invalid tensor role: " + tensor_role);
    for (const auto& t : tensors_)
      if (t.name == name)
        throw ValidationError("duplicate tensor name: " + name);
    tensors_.push_back({std::move(name), std::move(tensor_role), std::move(m)});
  }

  bool has(const std::string& name) const {
    for (const auto& t : tensors_)
      if (t.name == name) return true;
    return false;
  }

  const ContainerTensor& get(const std::string& name) const {
    for (const auto& t : tensors_)
      if (t.name == name) return t;
    throw ValidationError("missing tensor: " + name);
  }

  const std::vector<ContainerTensor>& tensors() const { return tensors_; }

  /// Serializes to bytes. Containers whose role is public must not leak
  /// passport or private tensors; that is enforced here, not at add time,
  /// so intermediate states stay flexible.
  std::string serialize() const {
    if (!detail::valid_role(role))
      throw RoleError("invalid container role: " + role);
    if (role == "public") {
      for (const auto& t : tensors_)
        if (t.role == "passport" || t.role == "private")
          throw RoleError("public container must not hold tensor '" + t.name +
                          "' with role " + t.role);
    }

    nlohmann::json header;
    header["format_version"] = 1;
    nlohmann::json meta = metadata;
    meta["role"] = role;
    header["metadata"] = meta;
    nlohmann::json tensor_list = nlohmann::json::array();
    std::uint64_t offset = 0;
    for (const auto& t : tensors_) {
      const std::uint64_t bytes = 8ull * t.matrix.size();
      tensor_list.push_back({{"name", t.name},
                             {"role", t.role},
                             {"shape", {t.matrix.rows(), t.matrix.cols()}},
                             {"dtype", "f64"},
                             {"byte_offset", offset},
                             {"byte_len", bytes}});
      offset += bytes;
    }
    header["tensors"] = tensor_list;
    const std::string header_str = header.dump();

    std::string out(kContainerMagic, 8);
    detail::push_u64_le(out, header_str.size());
    out += header_str;
    for (const auto& t : tensors_)
      for (double v : t.matrix.data()) detail::push_f64_le(out, v);
    return out;
  }

  static TensorContainer deserialize(const std::string& bytes) {
    if (bytes.size() < 16 || bytes.compare(0, 8, kContainerMagic, 8) != 0)
      throw ValidationError("container: bad magic");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t header_len = detail::read_u64_le(p + 8);
    if (16 + header_len > bytes.size())
      throw ValidationError("container: truncated header");
    nlohmann::json header;
    try {
      header = nlohmann::json::parse(bytes.substr(16, header_len));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("container: bad header json: ") + e.what());
    }
    if (!header.contains("format_version") || header["format_version"] != 1)
      throw ValidationError("container: unsupported format_version");

    TensorContainer c;
    c.metadata = header.value("metadata", nlohmann::json::object());
    c.role = c.metadata.value("role", std::string("public"));
    c.metadata.erase("role");
    if (!detail::valid_role(c.role))
      throw RoleError("container: invalid role " + c.role);

    const std::size_t payload_begin = 16 + header_len;
    const std::size_t payload_len = bytes.size() - payload_begin;
    std::uint64_t expected_offset = 0;
    for (const auto& entry : header.value("tensors", nlohmann::json::array())) {
      const std::string name = entry.at("name").get<std::string>();
      const std::string trole = entry.value("role", c.role);
      if (entry.at("dtype").get<std::string>() != "f64")
        throw ValidationError("container: unsupported dtype for " + name);
      const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
      if (shape.size() != 2)
        throw ValidationError("container: tensor " + name + " is not 2-d");
      const std::uint64_t off = entry.at("byte_offset").get<std::uint64_t>();
      const std::uint64_t len = entry.at("byte_len").get<std::uint64_t>();
      if (off != expected_offset)
        throw ValidationError("container: overlapping or gapped offsets");
      if (len != 8ull * shape[0] * shape[1])
        throw ValidationError("container: byte_len mismatch for " + name);
      if (off + len > payload_len)
        throw ValidationError("container: payload out of range for " + name);
      expected_offset = off + len;

      Matrix m(shape[0], shape[1]);
      const unsigned char* base = p + payload_begin + off;
      for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = detail::read_f64_le(base + 8 * i);
      c.tensors_.push_back({name, trole, std::move(m)});
    }
    return c;
  }

  void write(const std::string& path) const {
    const std::string bytes = serialize();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open for writing: " + path);
    f.write(bytes.data(), std::streamsize(bytes.size()));
    if (!f) throw ValidationError("write failed: " + path);
  }

  static TensorContainer read(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
    return deserialize(bytes);
  }

 private:
  std::vector<ContainerTensor> tensors_;
};

}  // namespace seal

#endif  // SEAL_CONTAINER_HPP
