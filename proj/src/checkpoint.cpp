#include "patsim/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "patsim/errors.hpp"

namespace patsim {

namespace {

constexpr std::uint32_t kVersion = 1;
constexpr std::array<char, 8> kW2vMagic{'P', 'A', 'T', 'S', 'I', 'M', 'W', '2'};
constexpr std::array<char, 8> kDbowMagic{'P', 'A', 'T', 'S', 'I', 'M', 'D', 'B'};

template <class U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U r = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) r = (r << 8) | ((v >> (8 * i)) & 0xFF);
    return r;
  } else {
    return v;
  }
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <class U>
  void integer(U v) {
    v = to_little(v);
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void f32(float v) { integer(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { integer(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view s) {
    integer(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void raw(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void floats(const std::vector<float>& v) {
    for (float x : v) f32(x);
  }
  void finish() {
    if (!out_) throw IoError("checkpoint write failed");
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <class U>
  U integer() {
    U v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in_) throw FormatError("checkpoint truncated", 0);
    return to_little(v);
  }
  float f32() { return std::bit_cast<float>(integer<std::uint32_t>()); }
  double f64() { return std::bit_cast<double>(integer<std::uint64_t>()); }
  std::string bytes() {
    const auto n = integer<std::uint32_t>();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) throw FormatError("checkpoint truncated", 0);
    return s;
  }
  std::vector<float> floats(std::size_t n) {
    std::vector<float> v(n);
    for (auto& x : v) x = f32();
    return v;
  }
  void expect_magic(const std::array<char, 8>& magic) {
    std::array<char, 8> got{};
    in_.read(got.data(), got.size());
    if (!in_ || got != magic) throw FormatError("checkpoint magic mismatch", 0);
  }

 private:
  std::istream& in_;
};

void write_vocab_header(Writer& w, const std::array<char, 8>& magic, const Vocabulary& vocab, std::size_t dim) {
  w.raw(magic.data(), magic.size());
  w.integer(kVersion);
  w.integer(static_cast<std::uint32_t>(dim));
  w.integer(static_cast<std::uint64_t>(vocab.min_count()));
  w.integer(static_cast<std::uint64_t>(vocab.document_count()));
  w.integer(static_cast<std::uint64_t>(vocab.size()));
  for (const auto& e : vocab.entries()) {
    w.bytes(e.token);
    w.integer(static_cast<std::uint64_t>(e.corpus_frequency));
    w.integer(static_cast<std::uint64_t>(e.document_frequency));
  }
}

Vocabulary read_vocab_header(Reader& r, const std::array<char, 8>& magic, std::size_t& dim) {
  r.expect_magic(magic);
  const auto version = r.integer<std::uint32_t>();
  if (version != kVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version), 0);
  dim = r.integer<std::uint32_t>();
  const auto min_count = r.integer<std::uint64_t>();
  const auto docs = r.integer<std::uint64_t>();
  const auto n = r.integer<std::uint64_t>();
  if (dim == 0) throw FormatError("checkpoint dim is zero", 0);
  std::vector<VocabEntry> entries;
  entries.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    VocabEntry e;
    e.token = r.bytes();
    e.corpus_frequency = r.integer<std::uint64_t>();
    e.document_frequency = r.integer<std::uint64_t>();
    entries.push_back(std::move(e));
  }
  try {
    return Vocabulary::from_entries(std::move(entries), min_count, docs);
  } catch (const ContractError& e) {
    throw FormatError(std::string("checkpoint vocabulary invalid: ") + e.what(), 0);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  return in;
}

}  // namespace

void save_w2v_tfidf(std::ostream& out, const W2vTfidfModel& model) {
  Writer w(out);
  const auto& wv = model.vectors();
  write_vocab_header(w, kW2vMagic, wv.vocab, wv.dim);
  w.integer(static_cast<std::uint32_t>(model.idf_variant() == IdfVariant::Smoothed ? 0 : 1));
  for (double v : model.idf()) w.f64(v);
  w.floats(wv.input);
  w.floats(wv.output);
  w.finish();
}

W2vTfidfModel load_w2v_tfidf(std::istream& in) {
  Reader r(in);
  WordVectors wv;
  wv.vocab = read_vocab_header(r, kW2vMagic, wv.dim);
  const auto variant_code = r.integer<std::uint32_t>();
  if (variant_code > 1) throw FormatError("unknown idf variant in checkpoint", 0);
  std::vector<double> idf(wv.vocab.size());
  for (auto& v : idf) v = r.f64();
  wv.input = r.floats(wv.vocab.size() * wv.dim);
  wv.output = r.floats(wv.vocab.size() * wv.dim);
  return W2vTfidfModel(std::move(wv), std::move(idf), variant_code == 0 ? IdfVariant::Smoothed : IdfVariant::RawLog);
}

void save_dbow(std::ostream& out, const DbowModel& model) {
  Writer w(out);
  write_vocab_header(w, kDbowMagic, model.vocab(), model.dim());
  w.integer(static_cast<std::uint64_t>(model.doc_ids().size()));
  for (const auto& id : model.doc_ids()) w.bytes(id);
  w.floats(model.doc_matrix());
  w.floats(model.output_matrix());
  w.finish();
}

DbowModel load_dbow(std::istream& in) {
  Reader r(in);
  std::size_t dim = 0;
  Vocabulary vocab = read_vocab_header(r, kDbowMagic, dim);
  const auto n = r.integer<std::uint64_t>();
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) ids.push_back(r.bytes());
  auto docs = r.floats(n * dim);
  auto output = r.floats(vocab.size() * dim);
  return DbowModel(std::move(vocab), dim, std::move(ids), std::move(docs), std::move(output));
}

void save_w2v_tfidf(const std::filesystem::path& path, const W2vTfidfModel& model) {
  auto out = open_out(path);
  save_w2v_tfidf(out, model);
}

W2vTfidfModel load_w2v_tfidf(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_w2v_tfidf(in);
}

void save_dbow(const std::filesystem::path& path, const DbowModel& model) {
  auto out = open_out(path);
  save_dbow(out, model);
}

DbowModel load_dbow(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_dbow(in);
}

}  // namespace patsim
