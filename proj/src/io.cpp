#include "fraccal/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fraccal {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw PreconditionError("csv: row width mismatch");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  rows_.push_back(std::move(line));
}

void CsvWriter::add_numeric_row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double c : cells) s.push_back(format_double(c));
  add_row(s);
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("csv: cannot open " + path.string());
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out << ',';
    out << header_[i];
  }
  out << '\n';
  for (const auto& r : rows_) out << r << '\n';
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NumericalError("sha256: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

Manifest::Manifest(std::filesystem::path out_dir) : dir_(std::move(out_dir)) {
  std::filesystem::create_directories(dir_);
}

void Manifest::record(const std::filesystem::path& path) { files_.push_back(path); }

std::filesystem::path Manifest::write_text(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("manifest: cannot open " + path.string());
  out << content;
  out.close();
  record(path);
  return path;
}

std::filesystem::path Manifest::write_json(const std::string& name, const json& j) {
  return write_text(name, j.dump(2) + "\n");
}

std::filesystem::path Manifest::write_csv(const std::string& name, const CsvWriter& csv) {
  const auto path = dir_ / name;
  csv.write(path);
  record(path);
  return path;
}

void Manifest::finalize() const {
  json m;
  m["files"] = json::array();
  for (const auto& f : files_) {
    m["files"].push_back({{"path", f.filename().string()},
                          {"sha256", sha256_file(f)},
                          {"bytes", std::filesystem::file_size(f)}});
  }
  std::ofstream out(dir_ / "manifest.json", std::ios::binary);
  out << m.dump(2) << "\n";
}

json grid_to_json(const GridSpec& g) { return json{{"L", g.L}, {"N", g.N}}; }

json mask_to_json(const RegionMask& m) {
  json arr = json::array();
  for (const Interval& iv : mask_to_intervals(m)) arr.push_back({{"lo", iv.lo}, {"hi", iv.hi}});
  return arr;
}

json chain_report_to_json(const ChainReport& r) {
  return json{{"y1", r.y1},           {"N_vert", r.n_vert}, {"N1", r.n1},
              {"N2", r.n2},           {"N3", r.n3},         {"C_Omega_W", r.c_omega_w},
              {"sigma", r.sigma}};
}

CsvWriter field_to_csv(const Field& f) {
  CsvWriter csv({"x", "value"});
  for (int j = 0; j < f.grid.N; ++j) csv.add_numeric_row({f.grid.node(j), f.values[j]});
  return csv;
}

CsvWriter profile_to_csv(const DecayProfile& p) {
  CsvWriter csv({"r", "mu"});
  for (std::size_t i = 0; i < p.radii.size(); ++i) csv.add_numeric_row({p.radii[i], p.mu[i]});
  return csv;
}

CsvWriter spectrum_to_csv(const Eigen::VectorXd& lam) {
  CsvWriter csv({"j", "lambda"});
  for (int j = 0; j < lam.size(); ++j) csv.add_numeric_row({static_cast<double>(j), lam[j]});
  return csv;
}

CsvWriter matrix_to_csv(const Eigen::MatrixXd& m, const std::string& prefix) {
  std::vector<std::string> header;
  header.reserve(m.cols());
  for (int b = 0; b < m.cols(); ++b) header.push_back(prefix + std::to_string(b));
  CsvWriter csv(header);
  for (int a = 0; a < m.rows(); ++a) {
    std::vector<double> row(m.cols());
    for (int b = 0; b < m.cols(); ++b) row[b] = m(a, b);
    csv.add_numeric_row(row);
  }
  return csv;
}

CsvWriter kernel_to_csv(const Kernel& k, double floor) {
  CsvWriter csv({"i", "j", "value"});
  for (int i = 0; i < k.grid.N; ++i)
    for (int j = 0; j < k.grid.N; ++j)
      if (std::abs(k.K(i, j)) > floor)
        csv.add_numeric_row({static_cast<double>(i), static_cast<double>(j), k.K(i, j)});
  return csv;
}

}  // namespace fraccal
