#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "openlex/model/record.hpp"
#include "openlex/model/record_json.hpp"

namespace openlex::testing {

inline std::filesystem::path fixtures() { return OPENLEX_FIXTURES_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, std::string_view s) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("openlex-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline Timestamp ts(std::string_view s) { return *parse_timestamp(s); }
inline Date date(std::string_view s) { return *Date::from_iso(s); }

/// Minimal valid English-only case.
inline DocumentRecord make_case(std::string dataset, std::string citation, std::string text,
                                std::string iso_date = "2024-01-15") {
  DocumentRecord r;
  r.dataset = std::move(dataset);
  r.kind = DocumentKind::kCase;
  r.citation_en = citation;
  r.name_en = "Case " + citation;
  r.document_date_en = date(iso_date);
  r.url_en = "https://example.test/" + citation;
  r.scraped_timestamp_en = ts("2025-08-01T12:00:00Z");
  r.unofficial_text_en = std::move(text);
  r.upstream_license = "Reproduced with permission; see source terms.";
  return r;
}

inline DocumentRecord make_law(std::string dataset, std::string citation, std::vector<LawSection> sections) {
  DocumentRecord r;
  r.dataset = std::move(dataset);
  r.kind = DocumentKind::kLaw;
  r.citation_en = citation;
  r.name_en = "Act " + citation;
  r.url_en = "https://laws.example.test/" + citation;
  r.scraped_timestamp_en = ts("2025-08-01T12:00:00Z");
  std::string text;
  for (auto& s : sections) {
    if (!text.empty()) text += "\n";
    text += s.label + " " + s.text;
  }
  r.unofficial_text_en = text;
  r.unofficial_sections_en = std::move(sections);
  r.upstream_license = "Open Government Licence - Canada";
  return r;
}

inline std::vector<DocumentRecord> read_jsonl(const std::filesystem::path& p) {
  std::vector<DocumentRecord> out;
  std::istringstream in(read_text(p));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(record_from_json(nlohmann::json::parse(line)));
  return out;
}

/// The five-case corpus under fixtures()/corpus, in file order.
inline std::vector<DocumentRecord> fixture_corpus() { return read_jsonl(fixtures() / "corpus" / "cases.jsonl"); }

}  // namespace openlex::testing
