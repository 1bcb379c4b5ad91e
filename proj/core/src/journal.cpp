#include "kv/journal.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "kv/checklist.hpp"
#include "kv/errors.hpp"

namespace kv::journal {
namespace {

using nlohmann::json;
using namespace kv::lifecycle;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json encode_address(const StepAddress& a) { return {{"stage", stage_number(a.stage)}, {"step", a.step}}; }

StepAddress decode_address(const json& j) {
  return {stage_from_number(j.at("stage").get<int>()), j.at("step").get<int>()};
}

json encode_decision(const GateDecision& d) {
  return std::visit(Overloaded{
                        [](const Go&) { return json{{"kind", "Go"}}; },
                        [](const Kill&) { return json{{"kind", "Kill"}}; },
                        [](const Hold&) { return json{{"kind", "Hold"}}; },
                        [](const Return& r) {
                          return json{{"kind", "Return"}, {"target", std::string(stage_roman(r.target))}};
                        },
                    },
                    d);
}

GateDecision decode_decision(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "Go") return Go{};
  if (kind == "Kill") return Kill{};
  if (kind == "Hold") return Hold{};
  if (kind == "Return") return Return{parse_stage(j.at("target").get<std::string>())};
  throw ValidationError("decision", "unknown gate decision '" + kind + "'");
}

json encode_criteria(const GateCriteria& criteria) {
  json out = json::object();
  for (const Criterion c : kAllCriteria) {
    if (const auto& entry = criteria.get(c))
      out[std::string(criterion_key(c))] = {{"score", entry->score}, {"note", entry->note}};
  }
  return out;
}

GateCriteria decode_criteria(const json& j) {
  GateCriteria criteria;
  for (const auto& [key, value] : j.items()) {
    const auto c = parse_criterion(key);
    if (!c) throw ValidationError("criteria", "unknown criterion '" + key + "'");
    criteria.set(*c, value.at("score").get<int>(), value.value("note", std::string{}));
  }
  return criteria;
}

json encode_payload(const EventKind& kind) {
  return std::visit(
      Overloaded{
          [](const ProjectCreated& e) { return json{{"project_id", e.project_id}, {"name", e.name}}; },
          [](const StepCompleted& e) {
            json j{{"address", encode_address(e.address)}, {"note", e.note}};
            j["artifact_digest"] = e.artifact_digest ? json(*e.artifact_digest) : json(nullptr);
            return j;
          },
          [](const LoopBack& e) { return json{{"from", encode_address(e.from)}, {"to", encode_address(e.to)}}; },
          [](const GateOpened& e) { return json{{"gate", e.gate}}; },
          [](const GateDecided& e) {
            return json{{"gate", e.gate},
                        {"decision", encode_decision(e.decision)},
                        {"criteria", encode_criteria(e.criteria)}};
          },
          [](const IntraStageGateDecided& e) {
            if (!e.loop_back_to) return json{{"outcome", "proceed"}};
            return json{{"outcome", "loop_back"}, {"target_step", *e.loop_back_to}};
          },
          [](const ChecklistItemDone& e) {
            return json{{"template", std::string(template_name(e.template_id))},
                        {"item", e.item_id},
                        {"note", e.note}};
          },
          [](const Resumed& e) { return json{{"gate", e.gate}}; },
          [](const CycleRestarted&) { return json::object(); },
      },
      kind);
}

EventKind decode_payload(std::string_view kind, const json& p) {
  if (kind == "ProjectCreated")
    return ProjectCreated{p.at("project_id").get<std::string>(), p.at("name").get<std::string>()};
  if (kind == "StepCompleted") {
    StepCompleted e{decode_address(p.at("address")), p.at("note").get<std::string>(), std::nullopt};
    if (p.contains("artifact_digest") && !p.at("artifact_digest").is_null())
      e.artifact_digest = p.at("artifact_digest").get<std::string>();
    return e;
  }
  if (kind == "LoopBack") return LoopBack{decode_address(p.at("from")), decode_address(p.at("to"))};
  if (kind == "GateOpened") return GateOpened{p.at("gate").get<int>()};
  if (kind == "GateDecided")
    return GateDecided{p.at("gate").get<int>(), decode_decision(p.at("decision")),
                       decode_criteria(p.at("criteria"))};
  if (kind == "IntraStageGateDecided") {
    const auto outcome = p.at("outcome").get<std::string>();
    if (outcome == "proceed") return IntraStageGateDecided{std::nullopt};
    if (outcome == "loop_back") return IntraStageGateDecided{p.at("target_step").get<int>()};
    throw ValidationError("outcome", "unknown intra-stage outcome '" + outcome + "'");
  }
  if (kind == "ChecklistItemDone")
    return ChecklistItemDone{parse_template(p.at("template").get<std::string>()), p.at("item").get<int>(),
                             p.value("note", std::string{})};
  if (kind == "Resumed") return Resumed{p.at("gate").get<int>()};
  if (kind == "CycleRestarted") return CycleRestarted{};
  throw ValidationError("kind", "unknown event kind '" + std::string(kind) + "'");
}

[[noreturn]] void throw_errno(const std::string& what, const std::filesystem::path& path) {
  throw IoError(what + " " + path.string() + ": " + std::strerror(errno));
}

void lock_fd(int fd, int operation, LockMode mode, const std::filesystem::path& path) {
  const int flags = operation | (mode == LockMode::FailFast ? LOCK_NB : 0);
  while (::flock(fd, flags) != 0) {
    if (errno == EINTR) continue;
    if (errno == EWOULDBLOCK) throw LockError("journal " + path.string() + " is locked by another writer");
    throw_errno("cannot lock", path);
  }
}

}  // namespace

std::string encode_event(const JournalEvent& event) {
  json record{{"seq", event.seq},
              {"ts", format_timestamp(event.timestamp)},
              {"kind", std::string(kind_name(event.kind))},
              {"payload", encode_payload(event.kind)}};
  return record.dump();
}

JournalEvent decode_event(std::string_view line, std::size_t line_no) {
  try {
    const json record = json::parse(line);
    JournalEvent event;
    event.seq = record.at("seq").get<std::uint64_t>();
    event.timestamp = parse_timestamp(record.at("ts").get<std::string>());
    event.kind = decode_payload(record.at("kind").get<std::string>(), record.at("payload"));
    return event;
  } catch (const json::exception& e) {
    throw JournalCorrupt(line_no, std::string("bad journal record: ") + e.what());
  } catch (const Error& e) {
    throw JournalCorrupt(line_no, std::string("bad journal record: ") + e.what());
  }
}

std::string serialize(std::span<const JournalEvent> events) {
  std::string out;
  for (const auto& event : events) {
    out += encode_event(event);
    out += '\n';
  }
  return out;
}

std::vector<JournalEvent> parse(std::string_view text) {
  std::vector<JournalEvent> events;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto newline = text.find('\n');
    if (newline == std::string_view::npos)
      throw JournalCorrupt(line_no, "torn trailing record (no terminating newline)");
    const auto line = text.substr(0, newline);
    text.remove_prefix(newline + 1);
    if (line.empty()) throw JournalCorrupt(line_no, "empty journal record");
    events.push_back(decode_event(line, line_no));
  }
  return events;
}

std::vector<JournalEvent> parse(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.view());
}

std::filesystem::path default_data_dir() {
  if (const char* dir = std::getenv("KV_DATA_DIR"); dir != nullptr && *dir != '\0') return dir;
  return "kv-data";
}

JournalFile::JournalFile(std::filesystem::path path, int fd) : path_(std::move(path)), fd_(fd) {}

JournalFile::JournalFile(JournalFile&& other) noexcept
    : path_(std::move(other.path_)), fd_(std::exchange(other.fd_, -1)) {}

JournalFile& JournalFile::operator=(JournalFile&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(other.path_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

JournalFile::~JournalFile() {
  if (fd_ >= 0) ::close(fd_);  // releases the flock
}

std::vector<JournalEvent> JournalFile::load() const {
  std::string text;
  char buf[8192];
  off_t offset = 0;
  for (;;) {
    const ssize_t n = ::pread(fd_, buf, sizeof buf, offset);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("cannot read", path_);
    }
    if (n == 0) break;
    text.append(buf, static_cast<std::size_t>(n));
    offset += n;
  }
  return parse(text);
}

void JournalFile::append(const JournalEvent& event) {
  const std::string line = encode_event(event) + '\n';
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("cannot append to", path_);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) throw_errno("cannot sync", path_);
}

JournalStore::JournalStore(std::filesystem::path data_dir, LockMode lock_mode)
    : data_dir_(std::move(data_dir)), lock_mode_(lock_mode) {}

std::filesystem::path JournalStore::journal_path(std::string_view project_id) const {
  lifecycle::validate_project_id(project_id);
  return data_dir_ / (std::string(project_id) + ".journal");
}

bool JournalStore::exists(std::string_view project_id) const {
  return std::filesystem::exists(journal_path(project_id));
}

std::vector<std::string> JournalStore::list_projects() const {
  std::vector<std::string> ids;
  std::error_code ec;
  if (!std::filesystem::is_directory(data_dir_, ec)) return ids;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".journal")
      ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

JournalFile JournalStore::create(std::string_view project_id) {
  const auto path = journal_path(project_id);
  std::filesystem::create_directories(data_dir_);
  const int fd = ::open(path.c_str(), O_RDWR | O_APPEND | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) {
    if (errno == EEXIST) throw ValidationError("project_id", "project '" + std::string(project_id) + "' already exists");
    throw_errno("cannot create", path);
  }
  JournalFile file(path, fd);
  lock_fd(fd, LOCK_EX, lock_mode_, path);
  return file;
}

JournalFile JournalStore::open(std::string_view project_id, JournalFile::Access access) {
  const auto path = journal_path(project_id);
  const int flags = access == JournalFile::Access::Write ? (O_RDWR | O_APPEND) : O_RDONLY;
  const int fd = ::open(path.c_str(), flags | O_CLOEXEC);
  if (fd < 0) {
    if (errno == ENOENT) throw ValidationError("project", "no journal for '" + std::string(project_id) + "' in " + data_dir_.string());
    throw_errno("cannot open", path);
  }
  JournalFile file(path, fd);
  lock_fd(fd, access == JournalFile::Access::Write ? LOCK_EX : LOCK_SH, lock_mode_, path);
  return file;
}

}  // namespace kv::journal
