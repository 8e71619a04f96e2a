#include <fstream>

#include "json.hpp"
#include "openlex/ingest/ingest.hpp"
#include "openlex/markup/dom.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::ingest {

namespace {

using markup::Node;

std::string_view local_name(std::string_view qname) {
  auto colon = qname.find(':');
  return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

const Node* child(const Node& n, std::string_view local) {
  for (auto* c : n.element_children())
    if (local_name(c->name) == local) return c;
  return nullptr;
}

std::string child_text(const Node& n, std::string_view local) {
  const Node* c = child(n, local);
  return c ? text::collapse_whitespace(c->text_content()) : std::string();
}

struct Item {
  std::string id, title, link, description, date;
};

Item rss_item(const Node& n) {
  Item it;
  it.title = child_text(n, "title");
  it.link = child_text(n, "link");
  it.id = child_text(n, "guid");
  if (auto* about = n.attribute("rdf:about"); about && it.id.empty()) it.id = *about;
  it.description = child_text(n, "description");
  it.date = child_text(n, "pubDate");
  if (it.date.empty()) it.date = child_text(n, "date");
  return it;
}

Item atom_entry(const Node& n) {
  Item it;
  it.title = child_text(n, "title");
  it.id = child_text(n, "id");
  for (auto* c : n.element_children()) {
    if (local_name(c->name) != "link") continue;
    auto* rel = c->attribute("rel");
    auto* href = c->attribute("href");
    if (href && (!rel || *rel == "alternate")) {
      it.link = *href;
      break;
    }
  }
  it.description = child_text(n, "summary");
  it.date = child_text(n, "published");
  if (it.date.empty()) it.date = child_text(n, "updated");
  return it;
}

std::string strip_citation(std::string title, const std::string& citation) {
  if (citation.empty()) return title;
  auto at = title.find(citation);
  if (at == std::string::npos) return title;
  title.erase(at, citation.size());
  for (auto pair : {"()", "[]"})
    if (auto p = title.find(pair); p != std::string::npos) title.erase(p, 2);
  auto junk = [](char c) { return c == ' ' || c == ',' || c == ';' || c == ':' || c == '-'; };
  auto dash_at = [&](std::size_t pos) {
    return title.compare(pos, 3, "\xE2\x80\x93") == 0 || title.compare(pos, 3, "\xE2\x80\x94") == 0;
  };
  for (;;) {
    if (!title.empty() && junk(title.back())) {
      title.pop_back();
    } else if (title.size() >= 3 && dash_at(title.size() - 3)) {
      title.resize(title.size() - 3);
    } else {
      break;
    }
  }
  std::size_t lead = 0;
  for (;;) {
    if (lead < title.size() && junk(title[lead])) {
      ++lead;
    } else if (lead + 3 <= title.size() && dash_at(lead)) {
      lead += 3;
    } else {
      break;
    }
  }
  title.erase(0, lead);
  return text::collapse_whitespace(title);
}

}  // namespace

FeedPoll poll_feed(std::string_view feed, const FeedState& state, const SourceDescriptor& source, Timestamp now) {
  auto doc = markup::parse(feed, markup::Mode::kXml);
  const Node* root = doc.document_element();
  std::vector<Item> items;
  auto root_name = local_name(root->name);
  if (root_name == "rss") {
    const Node* channel = child(*root, "channel");
    if (!channel) throw ParseError("rss feed without channel", root->offset);
    for (auto* c : channel->element_children())
      if (local_name(c->name) == "item") items.push_back(rss_item(*c));
  } else if (root_name == "RDF") {
    for (auto* c : root->element_children())
      if (local_name(c->name) == "item") items.push_back(rss_item(*c));
  } else if (root_name == "feed") {
    for (auto* c : root->element_children())
      if (local_name(c->name) == "entry") items.push_back(atom_entry(*c));
  } else {
    throw ParseError("not a syndication feed (root element <" + root->name + ">)", root->offset);
  }

  FeedPoll out;
  out.state = state;
  out.state.last_poll = now;
  for (auto& it : items) {
    std::string id = !it.id.empty() ? it.id : !it.link.empty() ? it.link : it.title;
    if (id.empty()) {
      out.skipped.push_back({"(untitled)", "no_identifier", "feed item has no guid, link or title"});
      continue;
    }
    if (state.seen.count(id)) {
      ++out.already_seen;
      continue;
    }
    if (!out.state.seen.insert(id).second) continue;
    if (it.link.empty()) {
      out.skipped.push_back({id, "missing_link", "feed item has no link"});
      continue;
    }
    DocumentStub stub;
    stub.dataset = source.dataset;
    stub.language = source.language;
    stub.url = source.feed_url.empty() ? it.link : resolve_url(source.feed_url, it.link);
    stub.citation = find_citation(it.title, source.selectors.citation_pattern);
    if (stub.citation.empty()) stub.citation = find_citation(it.description, source.selectors.citation_pattern);
    stub.name = strip_citation(it.title, stub.citation);
    if (!it.date.empty()) stub.date = parse_date(it.date, "auto");
    out.stubs.push_back(std::move(stub));
    out.ids.push_back(id);
  }
  return out;
}

FeedState load_feed_state(const std::filesystem::path& path) {
  FeedState s;
  std::ifstream in(path);
  if (!in) return s;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    for (auto& id : j.at("seen")) s.seen.insert(id.get<std::string>());
    if (j.contains("last_poll") && j["last_poll"].is_string())
      s.last_poll = parse_timestamp(j["last_poll"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad feed state " + path.string() + ": " + e.what());
  }
  return s;
}

void save_feed_state(const FeedState& state, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["seen"] = state.seen;
  j["last_poll"] = state.last_poll ? nlohmann::json(format_timestamp(*state.last_poll)) : nlohmann::json();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace openlex::ingest
