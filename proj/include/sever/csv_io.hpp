#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sever/dataset.hpp"
#include "sever/filter.hpp"

namespace sever {

/// Malformed input; the message carries the 1-based line number.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Dataset CSV: no header, one sample per line as x1,...,xd,y.
Dataset read_dataset_csv(std::istream& in);
Dataset load_csv(const std::filesystem::path& path);
/// Writes every sample (active or not) with 17 significant digits.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void save_csv(const Dataset& data, const std::filesystem::path& path);

struct TrainTestSplit {
    Dataset train;
    Dataset test;
};
/// Random train/test split of a loaded dataset: test_fraction of the samples
/// (rounded, at least one on each side) go to test; the seed fixes the draw.
TrainTestSplit split_dataset(const Dataset& data, double test_fraction, std::uint64_t seed);

/// Provenance CSV: header id,is_outlier.
void save_provenance(const Provenance& prov, const std::filesystem::path& path);
Provenance load_provenance(const std::filesystem::path& path);

/// Scores CSV: header round,id,score,is_outlier. Rows of one round share
/// `round`; is_outlier is 0 when no provenance is available.
void write_scores_header(std::ostream& out);
void write_scores(std::ostream& out, std::size_t round, const ScoreReport& report,
                  const Provenance* prov);
void save_scores(const std::vector<ScoreReport>& rounds, const Provenance* prov,
                 const std::filesystem::path& path);

/// Shortest round-trippable text for a double.
std::string format_double(double v);

}  // namespace sever
