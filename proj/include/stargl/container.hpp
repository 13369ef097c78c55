#ifndef STARGL_CONTAINER_HPP_
#define STARGL_CONTAINER_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stargl/config.hpp"
#include "stargl/types.hpp"

namespace stargl {

// Self-describing binary container: a JSON text header (metadata plus a
// named-array index with explicit shapes and dtypes) followed by raw
// little-endian payloads. Complex arrays are stored as (re, im) f64 pairs.
// Round-trips are bit-exact; files are written atomically (tmp + rename).
//
// layout: magic "SGLC" | u32 version | u64 header_len | header JSON | payloads
class ArrayContainer {
 public:
  static constexpr std::uint32_t kVersion = 1;

  nlohmann::json meta;

  void add_f64(const std::string& name, std::vector<std::size_t> shape, std::vector<double> data) {
    push(name, "f64", std::move(shape), std::move(data), {}, {});
  }
  void add_c128(const std::string& name, std::vector<std::size_t> shape, std::vector<cxd> data) {
    push(name, "c128", std::move(shape), {}, std::move(data), {});
  }
  void add_i64(const std::string& name, std::vector<std::size_t> shape,
               std::vector<std::int64_t> data) {
    push(name, "i64", std::move(shape), {}, {}, std::move(data));
  }

  bool has(const std::string& name) const { return index_.count(name) > 0; }

  const std::vector<double>& f64(const std::string& name) const { return entry(name, "f64").f64; }
  const std::vector<cxd>& c128(const std::string& name) const { return entry(name, "c128").c128; }
  const std::vector<std::int64_t>& i64(const std::string& name) const {
    return entry(name, "i64").i64;
  }
  const std::vector<std::size_t>& shape(const std::string& name) const {
    return entries_[index_.at(name)].shape;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const Entry& e : entries_) out.push_back(e.name);
    return out;
  }

  void save(const std::string& path) const {
    nlohmann::json header;
    header["meta"] = meta;
    header["arrays"] = nlohmann::json::array();
    for (const Entry& e : entries_) {
      header["arrays"].push_back({{"name", e.name}, {"kind", e.kind}, {"shape", e.shape}});
    }
    const std::string hs = header.dump();

    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("container: cannot write '" + tmp + "'");
      out.write("SGLC", 4);
      write_pod(out, kVersion);
      write_pod(out, static_cast<std::uint64_t>(hs.size()));
      out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
      for (const Entry& e : entries_) {
        if (e.kind == "f64")
          out.write(reinterpret_cast<const char*>(e.f64.data()),
                    static_cast<std::streamsize>(e.f64.size() * sizeof(double)));
        else if (e.kind == "c128")
          out.write(reinterpret_cast<const char*>(e.c128.data()),
                    static_cast<std::streamsize>(e.c128.size() * sizeof(cxd)));
        else
          out.write(reinterpret_cast<const char*>(e.i64.data()),
                    static_cast<std::streamsize>(e.i64.size() * sizeof(std::int64_t)));
      }
      if (!out) throw DataError("container: write failure on '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
  }

  static ArrayContainer load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("container: cannot open '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "SGLC")
      throw DataError("container: '" + path + "' is not an SGLC file");
    std::uint32_t version = 0;
    read_pod(in, version);
    if (version != kVersion)
      throw DataError("container: unsupported version " + std::to_string(version));
    std::uint64_t hlen = 0;
    read_pod(in, hlen);
    std::string hs(hlen, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(hlen));
    nlohmann::json header = nlohmann::json::parse(hs);

    ArrayContainer c;
    c.meta = header.at("meta");
    for (const auto& a : header.at("arrays")) {
      Entry e;
      e.name = a.at("name").get<std::string>();
      e.kind = a.at("kind").get<std::string>();
      e.shape = a.at("shape").get<std::vector<std::size_t>>();
      std::size_t count = 1;
      for (std::size_t s : e.shape) count *= s;
      if (e.kind == "f64") {
        e.f64.resize(count);
        in.read(reinterpret_cast<char*>(e.f64.data()),
                static_cast<std::streamsize>(count * sizeof(double)));
      } else if (e.kind == "c128") {
        e.c128.resize(count);
        in.read(reinterpret_cast<char*>(e.c128.data()),
                static_cast<std::streamsize>(count * sizeof(cxd)));
      } else if (e.kind == "i64") {
        e.i64.resize(count);
        in.read(reinterpret_cast<char*>(e.i64.data()),
                static_cast<std::streamsize>(count * sizeof(std::int64_t)));
      } else {
        throw DataError("container: unknown array kind '" + e.kind + "'");
      }
      c.index_[e.name] = c.entries_.size();
      c.entries_.push_back(std::move(e));
    }
    if (!in) throw DataError("container: truncated payload in '" + path + "'");
    return c;
  }

  // Hash over header + payload bytes, stable across save/load cycles.
  std::uint64_t content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Entry& e : entries_) {
      h = fnv1a(e.name.data(), e.name.size(), h);
      h = fnv1a(e.kind.data(), e.kind.size(), h);
      if (e.kind == "f64")
        h = fnv1a(e.f64.data(), e.f64.size() * sizeof(double), h);
      else if (e.kind == "c128")
        h = fnv1a(e.c128.data(), e.c128.size() * sizeof(cxd), h);
      else
        h = fnv1a(e.i64.data(), e.i64.size() * sizeof(std::int64_t), h);
    }
    const std::string ms = meta.dump();
    return fnv1a(ms.data(), ms.size(), h);
  }

 private:
  struct Entry {
    std::string name;
    std::string kind;
    std::vector<std::size_t> shape;
    std::vector<double> f64;
    std::vector<cxd> c128;
    std::vector<std::int64_t> i64;
  };

  void push(const std::string& name, const char* kind, std::vector<std::size_t> shape,
            std::vector<double> f, std::vector<cxd> c, std::vector<std::int64_t> i) {
    std::size_t count = 1;
    for (std::size_t s : shape) count *= s;
    const std::string k = kind;
    const std::size_t have = (k == "f64") ? f.size() : (k == "c128" ? c.size() : i.size());
    if (count != have)
      throw DataError("container: array '" + name + "' shape/size mismatch");
    if (index_.count(name)) throw DataError("container: duplicate array '" + name + "'");
    Entry e;
    e.name = name;
    e.kind = kind;
    e.shape = std::move(shape);
    e.f64 = std::move(f);
    e.c128 = std::move(c);
    e.i64 = std::move(i);
    index_[e.name] = entries_.size();
    entries_.push_back(std::move(e));
  }

  const Entry& entry(const std::string& name, const char* kind) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DataError("container: missing array '" + name + "'");
    const Entry& e = entries_[it->second];
    if (e.kind != kind)
      throw DataError("container: array '" + name + "' has kind " + e.kind + ", wanted " + kind);
    return e;
  }

  template <typename T>
  static void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  template <typename T>
  static void read_pod(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
  }

  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace stargl

#endif  // STARGL_CONTAINER_HPP_
