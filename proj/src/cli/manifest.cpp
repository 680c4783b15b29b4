#include "discotk/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "discotk/error.hpp"

namespace discotk {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for hashing");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);

  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

void RunManifest::add_input(const std::string& path) {
  inputs.push_back({std::filesystem::path(path).filename().string(), sha256_file(path)});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = version;
  j["config"] = config;
  auto& arr = j["inputs"] = nlohmann::json::array();
  for (const auto& in : inputs) arr.push_back({{"name", in.name}, {"sha256", in.sha256}});
  return j;
}

void RunManifest::write_for(const std::string& output_path) const {
  std::ofstream out(output_path + ".manifest.json");
  if (!out) throw DataError("cannot write manifest for '" + output_path + "'");
  out << to_json().dump(2) << '\n';
}

}  // namespace discotk
