#include "revmine/corpus_io.hpp"

#include <fstream>

#include <json.hpp>

namespace revmine {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'R', 'V', 'M', 'C'};
constexpr std::uint8_t kVersion = 1;

json corpus_to_json(const Corpus& corpus) {
  json users = json::array();
  for (const auto& user : corpus.users) {
    json entries = json::array();
    for (const auto& entry : user.entries) {
      json keys = json::array();
      for (const auto& ev : entry.keystrokes) {
        keys.push_back(json::array({ev.time_ms, ev.key.name()}));
      }
      entries.push_back({{"ts", entry.submitted_at},
                         {"keys", std::move(keys)},
                         {"text", entry.text}});
    }
    users.push_back({{"user", user.user_id}, {"entries", std::move(entries)}});
  }
  json profiles = json::array();
  for (const auto& [id, p] : corpus.profiles) {
    profiles.push_back({{"user", id},
                        {"group", std::string(to_string(p.group))},
                        {"gender", std::string(to_string(p.gender))},
                        {"age", p.age ? json(*p.age) : json(nullptr)}});
  }
  return {{"users", std::move(users)}, {"profiles", std::move(profiles)}};
}

Corpus corpus_from_json(const json& j) {
  Corpus corpus;
  for (const auto& u : j.at("users")) {
    UserLog log;
    log.user_id = u.at("user").get<std::string>();
    for (const auto& e : u.at("entries")) {
      SubmissionEntry entry;
      entry.user_id = log.user_id;
      entry.submitted_at = e.at("ts").get<std::int64_t>();
      for (const auto& k : e.at("keys")) {
        entry.keystrokes.push_back(
            {k.at(0).get<std::int64_t>(),
             Key::from_name(k.at(1).get<std::string>())});
      }
      entry.text = e.at("text").get<std::string>();
      log.entries.push_back(std::move(entry));
    }
    corpus.users.push_back(std::move(log));
  }
  for (const auto& p : j.at("profiles")) {
    UserProfile profile;
    profile.user_id = p.at("user").get<std::string>();
    const auto group = parse_group(p.at("group").get<std::string>());
    if (!group) throw FormatError("corpus cache: bad group value");
    profile.group = *group;
    profile.gender = parse_gender(p.at("gender").get<std::string>());
    if (!p.at("age").is_null()) profile.age = p.at("age").get<int>();
    corpus.profiles.emplace(profile.user_id, std::move(profile));
  }
  return corpus;
}

}  // namespace

void save_corpus(const Corpus& corpus, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  out.put(static_cast<char>(kVersion));
  const std::vector<std::uint8_t> payload = json::to_cbor(corpus_to_json(corpus));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("failed writing corpus cache");
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  save_corpus(corpus, out);
}

Corpus load_corpus(std::istream& in) {
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
    throw FormatError("not a corpus cache file (bad magic)");
  }
  const int version = in.get();
  if (version != kVersion) {
    throw FormatError("unsupported corpus cache version " +
                      std::to_string(version));
  }
  std::vector<std::uint8_t> payload{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
  try {
    return corpus_from_json(json::from_cbor(payload));
  } catch (const json::exception& e) {
    throw FormatError(std::string("corrupt corpus cache: ") + e.what());
  }
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus cache: " + path.string());
  return load_corpus(in);
}

}  // namespace revmine
