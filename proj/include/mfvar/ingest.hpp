#pragma once

#include <string>
#include <vector>

#include "mfvar/dataset.hpp"

namespace mfvar {

enum class Frequency { monthly, quarterly };

// A value for month M is published on day `delay_day` of month M + delay_months.
// Quarterly values are dated at the last month of their quarter.
struct SeriesMeta {
  std::string id;
  Frequency frequency = Frequency::monthly;
  int transform = 1;  // 1 level, 2 diff, 3 second diff, 4 log, 5 log diff, 6 second log diff, 7 diff of growth
  int delay_months = 0;
  int delay_day = 1;
  void validate() const;
};

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;
  int month_index() const { return year * 12 + (month - 1); }
  static Date parse(const std::string& s);  // YYYY-MM or YYYY-MM-DD
  std::string month_string() const;
};

struct RawPanel {
  std::vector<Date> dates;  // one per month, consecutive
  std::vector<std::string> ids;
  MatrixXd values;          // NaN for empty cells
};

RawPanel read_panel(const std::string& path);
std::vector<SeriesMeta> read_metadata(const std::string& path);

// Values published by `as_of`.
bool is_published(const Date& period, const SeriesMeta& meta, const Date& as_of);

// Applies a transform code along a series; for quarterly series only the
// quarter-end observations enter the differences.
VectorXd apply_transform(const VectorXd& x, int code, int stride = 1);

struct IngestResult {
  MixedFrequencyDataset data;
  std::vector<Date> dates;
  std::vector<SeriesMeta> meta;  // in dataset order (monthly first)
};

// Masks unpublished values, transforms, drops leading rows until every
// monthly series is observed, and standardizes on the balanced part.
IngestResult ingest(const RawPanel& panel, const std::vector<SeriesMeta>& meta, const Date& as_of);
IngestResult ingest(const std::string& data_path, const std::string& meta_path, const Date& as_of);

// Writes an ingested dataset in raw units (transform 1, no delays) so that
// ingesting it again with `as_of` after the last row gives the same dataset.
void write_dataset(const IngestResult& in, const std::string& data_path, const std::string& meta_path);

}  // namespace mfvar
