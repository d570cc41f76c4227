#pragma once

#include <filesystem>
#include <iosfwd>

#include "patsim/dbow.hpp"
#include "patsim/word2vec.hpp"

namespace patsim {

// Binary model checkpoints, version 1. All integers and floats are little-endian.
//
//   magic      8 bytes   "PATSIMW2" (word2vec TF-IDF) or "PATSIMDB" (PV-DBOW)
//   version    u32       1
//   dim        u32
//   min_count  u64
//   n_docs     u64       documents the vocabulary statistics were counted over
//   n_vocab    u64
//   vocabulary n_vocab x { u32 byte length, UTF-8 token, u64 corpus freq, u64 doc freq }
//
// PATSIMW2 continues with: u32 idf variant (0 smoothed, 1 raw log), f64 idf[n_vocab],
// f32 input[n_vocab * dim], f32 output[n_vocab * dim].
// PATSIMDB continues with: u64 n_vectors, n_vectors x { u32 length, id bytes },
// f32 doc_vectors[n_vectors * dim], f32 output[n_vocab * dim].

void save_w2v_tfidf(std::ostream& out, const W2vTfidfModel& model);
W2vTfidfModel load_w2v_tfidf(std::istream& in);
void save_w2v_tfidf(const std::filesystem::path& path, const W2vTfidfModel& model);
W2vTfidfModel load_w2v_tfidf(const std::filesystem::path& path);

void save_dbow(std::ostream& out, const DbowModel& model);
DbowModel load_dbow(std::istream& in);
void save_dbow(const std::filesystem::path& path, const DbowModel& model);
DbowModel load_dbow(const std::filesystem::path& path);

}  // namespace patsim
