#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "judge_patterns_data.hpp"
#include "openlex/analytics/stats.hpp"
#include "openlex/error.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::analytics {

namespace {

std::vector<std::regex> compile(const JudgePatterns& p) {
  std::vector<std::regex> out;
  for (auto& jp : p.patterns) {
    auto flags = std::regex::ECMAScript;
    if (jp.icase) flags |= std::regex::icase;
    try {
      out.emplace_back(jp.regex, flags);
    } catch (const std::regex_error& e) {
      throw ConfigError("judge pattern " + jp.id + ": " + e.what());
    }
  }
  return out;
}

bool is_particle(std::string_view w) {
  for (auto p : {"de", "du", "des", "la", "le", "van", "von", "di", "da", "del", "st", "saint"})
    if (w == p) return true;
  return false;
}

// "Sébastien Grammond, J." -> "GRAMMOND"; "Paul de Montigny" -> "DE MONTIGNY".
std::optional<std::string> surname(std::string name) {
  name = name.substr(0, name.find_first_of(",;(\t"));
  std::vector<std::string> words;
  std::istringstream in(name);
  for (std::string w; in >> w;) {
    while (!w.empty() && (w.back() == '.' || w.back() == ':')) w.pop_back();
    if (!w.empty()) words.push_back(w);
  }
  // Drop a trailing judicial suffix such as "J" or "JA".
  if (words.size() > 1 && (words.back() == "J" || words.back() == "JA" || words.back() == "C.J")) words.pop_back();
  if (words.empty()) return std::nullopt;
  std::string out = words.back();
  for (std::size_t i = words.size() - 1; i > 0 && is_particle(text::fold(words[i - 1])); --i) out = words[i - 1] + " " + out;
  out = text::fold(out);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (out.find_first_of("ABCDEFGHIJKLMNOPQRSTUVWXYZ") == std::string::npos) return std::nullopt;
  return out;
}

}  // namespace

JudgePatterns parse_judge_patterns(std::string_view json_text) {
  JudgePatterns p;
  try {
    auto j = nlohmann::json::parse(json_text);
    p.version = j.value("version", "");
    p.scan_codepoints = j.value("scan_codepoints", std::size_t{2000});
    for (auto& e : j.at("patterns")) p.patterns.push_back({e.at("id"), e.at("regex"), e.value("icase", false)});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("judge patterns: ") + e.what());
  }
  p.compiled = std::make_shared<const std::vector<std::regex>>(compile(p));
  return p;
}

JudgePatterns load_judge_patterns(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_judge_patterns(ss.str());
}

const JudgePatterns& default_judge_patterns() {
  static const JudgePatterns p = parse_judge_patterns(detail::kDefaultJudgePatterns);
  return p;
}

std::optional<std::string> extract_judge_from_text(std::string_view text, const JudgePatterns& patterns) {
  auto regexes = patterns.compiled ? patterns.compiled : std::make_shared<const std::vector<std::regex>>(compile(patterns));

  std::string_view head = text.substr(0, text::prefix_bytes(text, patterns.scan_codepoints));
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= head.size();) {
    std::size_t nl = head.find('\n', pos);
    if (nl == std::string_view::npos) nl = head.size();
    std::string_view line = head.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  for (auto& re : *regexes) {
    for (auto line : lines) {
      std::match_results<std::string_view::const_iterator> m;
      if (std::regex_search(line.begin(), line.end(), m, re) && m.size() > 1)
        if (auto s = surname(m.str(1))) return s;
    }
  }
  return std::nullopt;
}

std::optional<std::string> extract_judge(const DocumentRecord& r, const JudgePatterns& patterns) {
  for (Language l : kLanguages)
    if (r.has_text(l))
      if (auto j = extract_judge_from_text(*r.text(l), patterns)) return j;
  return std::nullopt;
}

}  // namespace openlex::analytics
