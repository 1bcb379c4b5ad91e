#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "kv/errors.hpp"
#include "kv/journal.hpp"
#include "kv/timestamp.hpp"
#include "support/lifecycle_helpers.hpp"
#include "support/temp_dir.hpp"

namespace {

using namespace kv::lifecycle;
using namespace kv::journal;
using namespace kv::testing;
using namespace std::chrono;
using kv::parse_timestamp;

// Touches every event kind.
Project busy_project() {
  auto p = new_project();
  p.complete_step("idea", "sha256:00ff");
  p.mark_checklist_item(TemplateId::ExcelPrototypeLoop, 2, "data \"feed\" notes");
  p.loop_back(1);
  complete_steps(p, 4);
  p.decide_intra_stage_gate(2);
  complete_steps(p, 3);
  p.decide_intra_stage_gate(std::nullopt);
  p.open_gate(1);
  p.decide_gate(1, Hold{}, full_criteria(2));
  p.resume();
  go_and_finish_stage(p, 1);
  p.decide_gate(2, Return{StageId::I}, full_criteria());
  drive_to_gate1(p);
  go_and_finish_stage(p, 1);
  go_and_finish_stage(p, 2);
  go_and_finish_stage(p, 3);
  p.restart_cycle();
  return p;
}

TEST(Timestamp, RoundTrip) {
  const auto ts = parse_timestamp("2024-01-02T03:04:05.123456Z");
  EXPECT_EQ(kv::format_timestamp(ts), "2024-01-02T03:04:05.123456Z");
  EXPECT_EQ(kv::format_timestamp(parse_timestamp("2024-01-02 03:04:05+00:00")), "2024-01-02T03:04:05Z");
  EXPECT_EQ(parse_timestamp("2024-01-02T03:04:05.5Z") - parse_timestamp("2024-01-02T03:04:05Z"),
            microseconds{500000});
  EXPECT_THROW(parse_timestamp("2024-13-02T03:04:05Z"), kv::ParseError);
  EXPECT_THROW(parse_timestamp("2024-01-02T03:04:05+02:00"), kv::ParseError);
  EXPECT_THROW(parse_timestamp("yesterday"), kv::ParseError);
}

TEST(Encoding, RecordShape) {
  auto p = new_project();
  const auto line = encode_event(p.journal()[0]);
  EXPECT_EQ(line,
            R"({"kind":"ProjectCreated","payload":{"name":"ABC options pricer","project_id":"abc"},)"
            R"("seq":1,"ts":"2024-01-02T00:00:01Z"})");
}

TEST(Encoding, RoundTripsEveryKind) {
  const auto p = busy_project();
  const auto text = serialize(p.journal());
  const auto parsed = parse(text);
  ASSERT_EQ(parsed.size(), p.journal().size());
  for (std::size_t i = 0; i < parsed.size(); ++i) EXPECT_EQ(parsed[i], p.journal()[i]) << "seq " << i + 1;
  EXPECT_EQ(replay_journal(parsed), p.state());
  EXPECT_EQ(serialize(parsed), text);
}

TEST(Parse, TornTrailingLineReported) {
  auto p = new_project();
  p.complete_step("x");
  auto text = serialize(p.journal());
  text.pop_back();
  try {
    parse(text);
    FAIL() << "expected JournalCorrupt";
  } catch (const kv::JournalCorrupt& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  text = serialize(p.journal());
  text += text.substr(0, 20);
  EXPECT_THROW(parse(text), kv::JournalCorrupt);
}

TEST(Parse, BadRecordsCiteLine) {
  auto p = new_project();
  const auto good = serialize(p.journal());
  for (const std::string bad : {"not json\n", "{\"seq\":2}\n", "\n",
                                R"({"seq":2,"ts":"2024-01-02T00:00:01Z","kind":"Teleport","payload":{}})"
                                "\n"}) {
    try {
      parse(good + bad);
      FAIL() << bad;
    } catch (const kv::JournalCorrupt& e) {
      EXPECT_EQ(e.line(), 2u) << bad;
    }
  }
  EXPECT_TRUE(parse("").empty());
}

class StoreTest : public ::testing::Test {
 protected:
  TempDir dir;
};

TEST_F(StoreTest, CreateAppendLoad) {
  JournalStore store(dir.path() / "nested");
  EXPECT_FALSE(store.exists("abc"));
  auto p = busy_project();
  {
    auto file = store.create("abc");
    for (const auto& e : p.journal()) file.append(e);
  }
  EXPECT_TRUE(store.exists("abc"));
  EXPECT_EQ(store.list_projects(), std::vector<std::string>{"abc"});
  EXPECT_EQ(store.journal_path("abc").filename(), "abc.journal");
  const auto file = store.open("abc", JournalFile::Access::Read);
  EXPECT_EQ(file.load(), p.journal());
}

TEST_F(StoreTest, DuplicateAndMissing) {
  JournalStore store(dir.path());
  store.create("abc");
  EXPECT_THROW(store.create("abc"), kv::ValidationError);
  EXPECT_THROW(store.open("nope", JournalFile::Access::Read), kv::ValidationError);
  EXPECT_THROW(store.journal_path("../escape"), kv::ValidationError);
}

TEST_F(StoreTest, FailFastLocking) {
  JournalStore store(dir.path(), LockMode::FailFast);
  auto writer = store.create("abc");
  EXPECT_THROW(store.open("abc", JournalFile::Access::Write), kv::LockError);
  EXPECT_THROW(store.open("abc", JournalFile::Access::Read), kv::LockError);
  {
    JournalFile released = std::move(writer);
  }
  auto r1 = store.open("abc", JournalFile::Access::Read);
  auto r2 = store.open("abc", JournalFile::Access::Read);
  EXPECT_THROW(store.open("abc", JournalFile::Access::Write), kv::LockError);
}

TEST_F(StoreTest, TornFileOnDiskIsReported) {
  JournalStore store(dir.path());
  auto p = new_project();
  store.create("abc").append(p.journal()[0]);
  std::ofstream(store.journal_path("abc"), std::ios::app) << R"({"seq":2,"ts":)";
  EXPECT_THROW(store.open("abc", JournalFile::Access::Read).load(), kv::JournalCorrupt);
}

TEST(DataDir, EnvironmentOverride) {
  ::setenv("KV_DATA_DIR", "/tmp/kv-elsewhere", 1);
  EXPECT_EQ(default_data_dir(), "/tmp/kv-elsewhere");
  ::unsetenv("KV_DATA_DIR");
  EXPECT_EQ(default_data_dir(), "kv-data");
}

}  // namespace
