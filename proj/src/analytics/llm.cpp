#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "openlex/analytics/llm.hpp"

#include <cstdlib>

#include "json.hpp"
#include "openlex/error.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::analytics {

namespace {

using nlohmann::json;

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

std::string http_post(const std::string& url, const std::string& body,
                      const std::vector<std::pair<std::string, std::string>>& headers, std::chrono::seconds timeout) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error("bad model endpoint URL: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client client(origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  httplib::Headers h;
  for (auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(path, h, body, "application/json");
  if (!res) throw Error("model endpoint: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw Error("model endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  return res->body;
}

std::string clip(std::string_view text, std::size_t codepoints) {
  return std::string(text.substr(0, text::prefix_bytes(text, codepoints)));
}

std::string document_text(const DocumentRecord& r) {
  for (Language l : kLanguages)
    if (r.has_text(l)) return *r.text(l);
  return {};
}

// Model replies sometimes wrap JSON in a fenced block.
json parse_reply(const std::string& reply) {
  auto open = reply.find('{');
  auto close = reply.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw Error("model reply is not a JSON object");
  try {
    return json::parse(reply.substr(open, close - open + 1));
  } catch (const json::exception& e) {
    throw Error(std::string("model reply is not valid JSON: ") + e.what());
  }
}

}  // namespace

std::optional<LlmConfig> LlmConfig::from_env() {
  LlmConfig c;
  c.base_url = env("OPENLEX_LLM_BASE_URL");
  c.api_key = env("OPENLEX_LLM_API_KEY");
  c.model = env("OPENLEX_LLM_MODEL");
  if (auto t = env("OPENLEX_LLM_TIMEOUT"); !t.empty()) c.timeout = std::chrono::seconds(std::atoi(t.c_str()));
  if (c.base_url.empty() || c.model.empty()) return std::nullopt;
  while (!c.base_url.empty() && c.base_url.back() == '/') c.base_url.pop_back();
  return c;
}

LlmClient::LlmClient(LlmConfig config, LlmTransport transport) : config_(std::move(config)), transport_(std::move(transport)) {
  if (!transport_) {
    auto timeout = config_.timeout;
    transport_ = [timeout](const std::string& url, const std::string& body,
                           const std::vector<std::pair<std::string, std::string>>& headers) {
      return http_post(url, body, headers, timeout);
    };
  }
}

std::string LlmClient::request_body(const std::vector<ChatMessage>& messages) const {
  json j;
  j["model"] = config_.model;
  j["temperature"] = 0;
  j["messages"] = json::array();
  for (auto& m : messages) j["messages"].push_back({{"role", m.role}, {"content", m.content}});
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string LlmClient::parse_response(const std::string& body) {
  try {
    auto j = json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(std::string("unexpected model response: ") + e.what());
  }
}

std::string LlmClient::complete(const std::vector<ChatMessage>& messages) const {
  std::vector<std::pair<std::string, std::string>> headers{{"Content-Type", "application/json"}};
  if (!config_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + config_.api_key);
  return parse_response(transport_(config_.base_url + "/chat/completions", request_body(messages), headers));
}

Classification LlmClassifier::classify(const DocumentRecord& r) const {
  std::string reply = client_.complete({
      {"system",
       "You classify Canadian court decisions. Reply with a JSON object only: "
       "{\"outcome\": \"allowed\" | \"dismissed\" | \"other\", \"category\": \"<application type>\"}. "
       "\"allowed\" means the court found a reviewable error and granted the application or appeal."},
      {"user", clip(document_text(r), client_.config().max_input_codepoints)},
  });
  auto j = parse_reply(reply);
  Classification c;
  std::string outcome = j.value("outcome", "other");
  c.outcome = outcome == "allowed" ? Outcome::kAllowed : outcome == "dismissed" ? Outcome::kDismissed : Outcome::kOther;
  c.category = j.value("category", "Other");
  if (c.category.empty()) c.category = "Other";
  return c;
}

void LlmSummarizer::summarize(const DocumentRecord& r, CaseSummary& s) const {
  std::string reply = client_.complete({
      {"system",
       "You summarize Canadian court decisions for practitioners. Reply with a JSON object only: "
       "{\"facts\": \"<two or three sentences>\", \"errors\": \"<the error the court found, or 'None'>\"}. "
       "Do not mention the citation."},
      {"user", "Outcome: " + std::string(to_string(s.outcome)) + "\nCategory: " + s.category + "\n\n" +
                   clip(document_text(r), client_.config().max_input_codepoints)},
  });
  auto j = parse_reply(reply);
  s.facts = j.value("facts", "");
  s.errors = j.value("errors", "");
}

std::string LlmSummarizer::key_themes(const std::vector<CaseSummary>& summaries) const {
  if (summaries.empty()) return "No decisions were released in this period.";
  std::string cases;
  for (auto& s : summaries)
    cases += "- " + std::string(to_string(s.outcome)) + " / " + s.category + ": " + s.facts + " Errors: " + s.errors + "\n";
  return client_.complete({
      {"system",
       "Write one paragraph naming the key themes across these decisions, focusing on the errors found. "
       "Plain text, no citations."},
      {"user", cases},
  });
}

}  // namespace openlex::analytics
