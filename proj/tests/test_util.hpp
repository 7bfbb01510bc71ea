#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "prefnet/prefmath.hpp"
#include "prefnet/rng.hpp"

namespace testutil {

inline prefnet::Preference pref(std::initializer_list<int> ids) {
  std::vector<prefnet::Alt> v;
  for (int x : ids) v.push_back(static_cast<prefnet::Alt>(x));
  return prefnet::Preference(std::move(v));
}

inline prefnet::Preference random_pref(int r, prefnet::Rng& rng) {
  std::vector<prefnet::Alt> v(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) v[static_cast<std::size_t>(i)] = static_cast<prefnet::Alt>(i);
  for (int i = 0; i < r; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(r - i)));
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  }
  return prefnet::Preference(std::move(v));
}

inline prefnet::PreferenceProfile random_profile(int n, int r, prefnet::Rng& rng) {
  prefnet::PreferenceProfile out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(random_pref(r, rng));
  return out;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("prefnet_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path write_file(const TempDir& dir, const std::string& name,
                                        const std::string& content) {
  const auto p = dir.file(name);
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace testutil
