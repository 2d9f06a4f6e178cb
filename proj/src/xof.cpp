#include "xof.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace cvqc::detail {

namespace {

struct CtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

// Fetched once; handing the legacy getter to DigestInit re-fetches every call.
const EVP_MD* shake_md() {
  static EVP_MD* md = EVP_MD_fetch(nullptr, "SHAKE256", nullptr);
  return md;
}

}  // namespace

std::vector<std::uint8_t> shake256(std::span<const std::span<const std::uint8_t>> parts,
                                   std::size_t out_bytes) {
  thread_local std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || !shake_md() || EVP_DigestInit_ex(ctx.get(), shake_md(), nullptr) != 1)
    throw std::runtime_error("shake256: digest init failed");
  for (auto part : parts)
    if (!part.empty() && EVP_DigestUpdate(ctx.get(), part.data(), part.size()) != 1)
      throw std::runtime_error("shake256: update failed");
  std::vector<std::uint8_t> out(out_bytes);
  if (out_bytes > 0 && EVP_DigestFinalXOF(ctx.get(), out.data(), out_bytes) != 1)
    throw std::runtime_error("shake256: squeeze failed");
  return out;
}

}  // namespace cvqc::detail
