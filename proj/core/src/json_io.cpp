#include "ledgernet/json_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "ledgernet/errors.hpp"

namespace ledgernet {

namespace {

// SAX handler that builds a DOM like nlohmann's own parser but keeps
// oversized integer tokens exact.
class PreservingBuilder : public nlohmann::json_sax<Json> {
 public:
  explicit PreservingBuilder(Json& root) : root_(root) {}

  bool null() override { return put(nullptr); }
  bool boolean(bool v) override { return put(v); }
  bool number_integer(number_integer_t v) override { return put(v); }
  bool number_unsigned(number_unsigned_t v) override { return put(v); }
  bool number_float(number_float_t v, const string_t& raw) override {
    if (!raw.empty() && std::all_of(raw.begin(), raw.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return put(raw);
    }
    return put(v);
  }
  bool string(string_t& v) override { return put(v); }
  bool binary(binary_t& v) override { return put(Json::binary(v)); }

  bool start_object(std::size_t) override {
    Json* slot = place(Json::object());
    stack_.push_back(slot);
    return true;
  }
  bool key(string_t& k) override {
    pending_key_ = k;
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    Json* slot = place(Json::array());
    stack_.push_back(slot);
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }

  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    error_offset_ = position;
    error_ = ex.what();
    return false;
  }

  const std::optional<std::string>& error() const { return error_; }
  std::size_t error_offset() const { return error_offset_; }

 private:
  template <typename T>
  bool put(T&& v) {
    place(Json(std::forward<T>(v)));
    return true;
  }

  Json* place(Json v) {
    if (stack_.empty()) {
      root_ = std::move(v);
      return &root_;
    }
    Json& parent = *stack_.back();
    if (parent.is_array()) {
      parent.push_back(std::move(v));
      return &parent.back();
    }
    Json& slot = parent[pending_key_];
    slot = std::move(v);
    return &slot;
  }

  Json& root_;
  std::vector<Json*> stack_;
  std::string pending_key_;
  std::optional<std::string> error_;
  std::size_t error_offset_ = 0;
};

}  // namespace

Json parse_json(std::string_view text, std::size_t line) {
  Json root;
  PreservingBuilder builder(root);
  bool ok = Json::sax_parse(text.begin(), text.end(), &builder);
  if (!ok || builder.error()) {
    throw ParseError(builder.error().value_or("invalid JSON"), line, builder.error_offset());
  }
  return root;
}

std::optional<Amount> amount_from_json(const Json& value) {
  if (value.is_number_unsigned()) return Amount(value.get<std::uint64_t>());
  if (value.is_number_integer()) {
    auto v = value.get<std::int64_t>();
    if (v < 0) return std::nullopt;
    return Amount(static_cast<std::uint64_t>(v));
  }
  if (value.is_string()) return Amount::parse_decimal(value.get_ref<const std::string&>());
  return std::nullopt;
}

Json amount_to_json(Amount amount) {
  if (amount.fits_u64()) return Json(static_cast<std::uint64_t>(amount.raw()));
  return Json(amount.to_string());
}

std::string quote_json(std::string_view s) { return Json(std::string(s)).dump(); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

}  // namespace ledgernet
