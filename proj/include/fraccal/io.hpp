// io.hpp — CSV/JSON serialization for every artifact type, plus the output
// manifest.  All numeric output uses 17-significant-digit decimal so reruns
// are byte-identical.

#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "fraccal/dn_map.hpp"
#include "fraccal/geometry.hpp"
#include "fraccal/kernel.hpp"
#include "fraccal/solver.hpp"

namespace fraccal {

using json = nlohmann::json;

std::string format_double(double v);  // %.17g

// CSV writer: comma separation, \n line endings, mandatory header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_numeric_row(const std::vector<double>& cells);
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Collects written files and emits manifest.json with per-file hashes.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path out_dir);
  const std::filesystem::path& dir() const { return dir_; }
  void record(const std::filesystem::path& path);
  std::filesystem::path write_text(const std::string& name, const std::string& content);
  std::filesystem::path write_json(const std::string& name, const json& j);
  std::filesystem::path write_csv(const std::string& name, const CsvWriter& csv);
  void finalize() const;  // writes manifest.json

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

json grid_to_json(const GridSpec& g);
json mask_to_json(const RegionMask& m);
json chain_report_to_json(const ChainReport& r);

CsvWriter field_to_csv(const Field& f);                  // columns x, value
CsvWriter profile_to_csv(const DecayProfile& p);         // columns r, mu
CsvWriter spectrum_to_csv(const Eigen::VectorXd& lam);   // columns j, lambda
CsvWriter matrix_to_csv(const Eigen::MatrixXd& m, const std::string& prefix);
// kernel triplets (i, j, value) above the magnitude floor
CsvWriter kernel_to_csv(const Kernel& k, double floor);

}  // namespace fraccal
