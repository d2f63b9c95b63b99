#include "mfvar/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "mfvar/errors.hpp"

namespace mfvar {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_value(const std::string& s, const std::string& where) {
  if (s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == ".") return kMissing;
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse '" + s + "' at " + where);
  }
  if (pos != s.size()) throw ValidationError("cannot parse '" + s + "' at " + where);
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("cannot parse " + what + " '" + s + "'");
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ValidationError("'" + path + "' is empty");
  return lines;
}

}  // namespace

void SeriesMeta::validate() const {
  require(!id.empty(), "series id must not be empty");
  require(transform >= 1 && transform <= 7, "series '" + id + "': transform code must be in 1..7");
  const int max_delay = frequency == Frequency::quarterly ? 3 : 2;
  require(delay_months >= 0 && delay_months <= max_delay,
          "series '" + id + "': publication delay of " + std::to_string(delay_months) + " months is out of range");
  require(delay_day >= 1 && delay_day <= 31, "series '" + id + "': publication day must be in 1..31");
}

Date Date::parse(const std::string& s) {
  Date d;
  int n = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d%c", &d.year, &d.month, &d.day, &tail) == 3) {
    n = 3;
  } else if (std::sscanf(s.c_str(), "%d-%d%c", &d.year, &d.month, &tail) == 2) {
    n = 2;
    d.day = 1;
  }
  if (n == 0 || d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
    throw ValidationError("invalid date '" + s + "'");
  return d;
}

std::string Date::month_string() const {
  std::ostringstream os;
  os << std::setw(4) << std::setfill('0') << year << '-' << std::setw(2) << month;
  return os.str();
}

RawPanel read_panel(const std::string& path) {
  auto lines = read_lines(path);
  RawPanel p;
  auto head = split_csv(lines[0]);
  require(head.size() >= 2, "data header needs a date column and at least one series");
  p.ids.assign(head.begin() + 1, head.end());
  p.values.resize(static_cast<Index>(lines.size() - 1), static_cast<Index>(p.ids.size()));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_csv(lines[r]);
    if (cells.size() != head.size())
      throw ValidationError("row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(head.size()));
    Date d = Date::parse(cells[0]);
    if (!p.dates.empty() && d.month_index() != p.dates.back().month_index() + 1)
      throw ValidationError("dates must be consecutive months; row " + std::to_string(r + 1) + " (" + cells[0] +
                            ") breaks the sequence");
    p.dates.push_back(d);
    for (std::size_t c = 1; c < cells.size(); ++c)
      p.values(static_cast<Index>(r - 1), static_cast<Index>(c - 1)) =
          parse_value(cells[c], "row " + std::to_string(r + 1) + ", column '" + head[c] + "'");
  }
  return p;
}

std::vector<SeriesMeta> read_metadata(const std::string& path) {
  auto lines = read_lines(path);
  auto head = split_csv(lines[0]);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < head.size(); ++i) col[head[i]] = i;
  for (const char* k : {"id", "frequency", "transform", "delay_months", "delay_day"})
    if (!col.count(k)) throw ValidationError(std::string("metadata is missing the '") + k + "' column");
  std::vector<SeriesMeta> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto c = split_csv(lines[r]);
    if (c.size() != head.size()) throw ValidationError("metadata row " + std::to_string(r + 1) + " is malformed");
    SeriesMeta m;
    m.id = c[col["id"]];
    const std::string f = c[col["frequency"]];
    if (f == "monthly" || f == "m" || f == "M")
      m.frequency = Frequency::monthly;
    else if (f == "quarterly" || f == "q" || f == "Q")
      m.frequency = Frequency::quarterly;
    else
      throw ValidationError("series '" + m.id + "': unknown frequency '" + f + "'");
    m.transform = parse_int(c[col["transform"]], "transform code");
    m.delay_months = parse_int(c[col["delay_months"]], "delay");
    m.delay_day = parse_int(c[col["delay_day"]], "delay day");
    m.validate();
    out.push_back(m);
  }
  return out;
}

bool is_published(const Date& period, const SeriesMeta& meta, const Date& as_of) {
  const int release = period.month_index() + meta.delay_months;
  const int now = as_of.month_index();
  return release < now || (release == now && as_of.day >= meta.delay_day);
}

VectorXd apply_transform(const VectorXd& x, int code, int stride) {
  require(code >= 1 && code <= 7, "transform code must be in 1..7");
  const Index T = x.size();
  VectorXd y = x;
  if (code >= 4 && code <= 6) {
    for (Index t = 0; t < T; ++t) {
      if (std::isnan(x(t))) continue;
      if (!(x(t) > 0)) throw ValidationError("log transform of a nonpositive value");
      y(t) = std::log(x(t));
    }
  }
  auto diff = [&](const VectorXd& v) {
    VectorXd d = VectorXd::Constant(T, kMissing);
    for (Index t = stride; t < T; ++t) d(t) = v(t) - v(t - stride);
    return d;
  };
  switch (code) {
    case 1:
    case 4:
      return y;
    case 2:
    case 5:
      return diff(y);
    case 3:
    case 6:
      return diff(diff(y));
    default: {
      VectorXd g = VectorXd::Constant(T, kMissing);
      for (Index t = stride; t < T; ++t) g(t) = x(t) / x(t - stride) - 1.0;
      return diff(g);
    }
  }
}

IngestResult ingest(const RawPanel& panel, const std::vector<SeriesMeta>& meta, const Date& as_of) {
  std::map<std::string, const SeriesMeta*> by_id;
  for (const auto& m : meta) {
    m.validate();
    if (!by_id.emplace(m.id, &m).second) throw ValidationError("duplicate metadata for series '" + m.id + "'");
  }
  for (const auto& id : panel.ids)
    if (!by_id.count(id)) throw ValidationError("unknown series '" + id + "' in data (no metadata)");
  for (const auto& m : meta)
    if (std::find(panel.ids.begin(), panel.ids.end(), m.id) == panel.ids.end())
      throw ValidationError("series '" + m.id + "' has metadata but no data column");

  // keep rows up to the as-of month
  Index T = 0;
  while (T < static_cast<Index>(panel.dates.size()) && panel.dates[T].month_index() <= as_of.month_index()) ++T;
  require(T > 0, "no data on or before the as-of date");

  std::vector<Index> mcols, qcols;
  for (Index c = 0; c < static_cast<Index>(panel.ids.size()); ++c)
    (by_id[panel.ids[c]]->frequency == Frequency::monthly ? mcols : qcols).push_back(c);
  require(!mcols.empty(), "at least one monthly series is required");

  // quarter-end months are March, June, September, December
  auto qend = [&](Index t) { return panel.dates[t].month % 3 == 0; };

  IngestResult out;
  MatrixXd all(T, static_cast<Index>(mcols.size() + qcols.size()));
  Index k = 0;
  for (Index c : mcols) {
    const SeriesMeta& m = *by_id[panel.ids[c]];
    VectorXd v = panel.values.col(c).head(T);
    for (Index t = 0; t < T; ++t)
      if (!is_published(panel.dates[t], m, as_of)) v(t) = kMissing;
    all.col(k++) = apply_transform(v, m.transform, 1);
    out.meta.push_back(m);
  }
  for (Index c : qcols) {
    const SeriesMeta& m = *by_id[panel.ids[c]];
    VectorXd v = panel.values.col(c).head(T);
    for (Index t = 0; t < T; ++t) {
      if (std::isnan(v(t))) continue;
      if (!qend(t))
        throw ValidationError("quarterly series '" + m.id + "' has a value in " + panel.dates[t].month_string() +
                              ", which is not a quarter-end month");
      if (!is_published(panel.dates[t], m, as_of)) v(t) = kMissing;
    }
    all.col(k++) = apply_transform(v, m.transform, 3);
    out.meta.push_back(m);
  }

  // leading rows where a monthly series is still missing (transform losses, late starts)
  const Index nm = static_cast<Index>(mcols.size());
  Index start = 0;
  while (start < T && all.row(start).head(nm).hasNaN()) ++start;
  require(start < T, "no period where every monthly series is observed");
  MatrixXd data = all.bottomRows(T - start);
  out.dates.assign(panel.dates.begin() + start, panel.dates.begin() + T);
  const Index Tn = T - start;

  // balanced part: rows before the first missing monthly value
  Index tb = 0;
  while (tb < Tn && !data.row(tb).head(nm).hasNaN()) ++tb;
  Standardization st;
  st.center.resize(data.cols());
  st.scale.resize(data.cols());
  for (Index j = 0; j < data.cols(); ++j) {
    std::vector<double> obs;
    for (Index t = 0; t < tb; ++t)
      if (!std::isnan(data(t, j))) obs.push_back(data(t, j));
    if (obs.size() < 2) throw ValidationError("series '" + out.meta[j].id + "' has too few observations");
    double mean = 0;
    for (double v : obs) mean += v;
    mean /= static_cast<double>(obs.size());
    double ss = 0;
    for (double v : obs) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(obs.size() - 1));
    if (!(sd > 0)) throw ValidationError("series '" + out.meta[j].id + "' is constant");
    st.center(j) = mean;
    st.scale(j) = sd;
    data.col(j) = (data.col(j).array() - mean) / sd;
  }

  std::vector<std::string> names;
  for (const auto& m : out.meta) names.push_back(m.id);
  int phase = 0;
  while (out.dates[static_cast<std::size_t>(phase)].month % 3 != 0) ++phase;
  out.data = MixedFrequencyDataset(data.leftCols(nm), data.rightCols(data.cols() - nm), phase, names);
  out.data.standardization = st;
  return out;
}

IngestResult ingest(const std::string& data_path, const std::string& meta_path, const Date& as_of) {
  return ingest(read_panel(data_path), read_metadata(meta_path), as_of);
}

void write_dataset(const IngestResult& in, const std::string& data_path, const std::string& meta_path) {
  const auto& d = in.data;
  const auto& st = d.standardization;
  require(!st.empty(), "dataset has no standardization constants");
  std::ofstream os(data_path);
  if (!os) throw ValidationError("cannot write '" + data_path + "'");
  os << "date";
  for (const auto& m : in.meta) os << ',' << m.id;
  os << '\n' << std::setprecision(17);
  for (int t = 0; t < d.periods(); ++t) {
    os << in.dates[static_cast<std::size_t>(t)].month_string();
    for (int j = 0; j < d.n_vars(); ++j) {
      const double z = j < d.n_monthly() ? d.monthly()(t, j) : d.quarterly()(t, j - d.n_monthly());
      os << ',';
      if (!std::isnan(z)) os << st.center(j) + st.scale(j) * z;
    }
    os << '\n';
  }
  std::ofstream ms(meta_path);
  if (!ms) throw ValidationError("cannot write '" + meta_path + "'");
  ms << "id,frequency,transform,delay_months,delay_day\n";
  for (const auto& m : in.meta)
    ms << m.id << ',' << (m.frequency == Frequency::monthly ? "monthly" : "quarterly") << ",1,0,1\n";
}

}  // namespace mfvar
