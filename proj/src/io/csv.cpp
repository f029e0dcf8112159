#include "ptbec/io/csv.hpp"

#include <array>
#include <cstdio>
#include <memory>

#include <openssl/evp.h>

#include "ptbec/errors.hpp"

namespace ptbec::io {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0 as well
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), columns_(header.size()), path_(path) {
  if (!out_) throw Error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<CsvCell> cells) {
  if (cells.size() != columns_) throw UsageError("csv row width does not match header");
  bool first = true;
  for (const CsvCell& c : cells) {
    if (!first) out_ << ',';
    first = false;
    if (const auto* d = std::get_if<double>(&c))
      out_ << format_double(*d);
    else if (const auto* i = std::get_if<long long>(&c))
      out_ << *i;
    else
      out_ << std::get<std::string>(c);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error("failed writing '" + path_.string() + "'");
}

std::string sha256_file(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Error("cannot read '" + path.string() + "'");
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(f, &std::fclose);
  std::unique_ptr<EVP_MD_CTX, void (*)(EVP_MD_CTX*)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<unsigned char, 1 << 15> buf;
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), f)) > 0)
    EVP_DigestUpdate(ctx.get(), buf.data(), got);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

}  // namespace ptbec::io
