// Copyright 2026 The SALSA Workbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "salsa/error.h"
#include "salsa/json_io.h"
#include "salsa/store.h"
#include "support/fixtures.h"

using namespace salsa;
using namespace salsa::testing;
namespace fs = std::filesystem;

namespace {

Store::Clock FixedClock() {
  return [] { return std::string("2026-02-03T04:05:06Z"); };
}

json Load(const std::string &name) { return read_json_file(data_path(name)); }

// Record JSON without store-assigned fields, keyed for order-insensitive
// comparison.
std::set<std::string> RecordSet(const json &records) {
  std::set<std::string> out;
  for (const json &r : records) out.insert(r.dump());
  return out;
}

Corpus TinyCorpus(const std::string &id, int pairs) {
  Corpus c;
  c.id = id;
  for (int i = 0; i < pairs; ++i) {
    c.pairs.push_back(make_pair(id + "-" + std::to_string(i), "The old man walked home slowly.", "The man walked home."));
  }
  return c;
}

Edit OldDeletion(const SentencePair &p) {
  return make_edit("d1", Operation::kDeletion, {tok_span(p, Side::kComplex, 1, 1)}, InfoChange::kLess);
}

}  // namespace

TEST_SUITE("store round trip") {
  TEST_CASE("fixture corpora and annotations survive import and export") {
    for (const std::string stem : {"scoring", "workflow"}) {
      CAPTURE(stem);
      TempDir dir;
      const json corpus_doc = Load(stem + "_corpus.json");
      const json annotations_doc = Load(stem + "_annotations.json");
      {
        Store store(dir.path(), Typology::Default(), FixedClock());
        CHECK(store.import_document(corpus_doc) == corpus_doc["id"]);
        store.import_document(annotations_doc);
      }
      Store store(dir.path(), Typology::Default(), FixedClock());
      const json exported = store.export_dataset();
      CHECK(exported["format"] == "salsa-dataset");
      REQUIRE(exported["corpora"].size() == 1);
      CHECK(exported["corpora"][0] == corpus_doc);
      CHECK(RecordSet(exported["records"]) == RecordSet(annotations_doc["records"]));

      TempDir again;
      Store copy(again.path(), Typology::Default(), FixedClock());
      copy.import_document(exported);
      CHECK(copy.export_dataset() == exported);
    }
  }

  TEST_CASE("overlapping spans are preserved exactly") {
    TempDir dir;
    Store store(dir.path());
    store.import_document(Load("workflow_corpus.json"));
    store.import_document(Load("workflow_annotations.json"));
    const auto records = store.records_for("w-1");
    const auto b = std::find_if(records.begin(), records.end(), [](const AnnotationRecord &r) {
      return r.annotator == "b" && r.stage == Stage::kSelection;
    });
    REQUIRE(b != records.end());
    REQUIRE(b->edits.size() == 3);
    CHECK(b->edits[0].spans[0].start == 4);
    CHECK(b->edits[2].spans[0].start == 4);
    CHECK(b->edits[2].spans[0].end == 27);
  }

  TEST_CASE("duplicate imports are rejected") {
    TempDir dir;
    Store store(dir.path());
    store.import_corpus(TinyCorpus("c", 2));
    CHECK_THROWS_AS(store.import_corpus(TinyCorpus("c", 1)), InvalidInput);
    Corpus clash = TinyCorpus("d", 1);
    clash.pairs[0].id = "c-0";
    CHECK_THROWS_AS(store.import_corpus(clash), InvalidInput);
    const AnnotationRecord r = record("a", "c-0", Stage::kSelection, {});
    store.import_records({r});
    CHECK_THROWS_AS(store.import_records({r}), ConflictError);
    CHECK_THROWS_AS(store.import_records({record("a", "nope", Stage::kSelection, {})}), InvalidInput);
    CHECK_THROWS_AS(store.pair("nope"), NotFound);
    CHECK_THROWS_AS(store.corpus("nope"), NotFound);
  }

  TEST_CASE("awkward ids are encoded on disk") {
    for (const std::string id : {"a/b", "..", "x y%z", "ünï"}) {
      const std::string enc = encode_path_component(id);
      CHECK(enc.find('/') == std::string::npos);
      CHECK(enc != "..");
      CHECK(decode_path_component(enc) == id);
    }
    TempDir dir;
    {
      Store store(dir.path());
      store.import_corpus(TinyCorpus("c/1", 1));
    }
    Store store(dir.path());
    CHECK(store.corpus_ids() == std::vector<std::string>{"c/1"});
  }
}

TEST_SUITE("store workflow") {
  TEST_CASE("three stages persist and reload") {
    TempDir dir;
    const Corpus corpus = TinyCorpus("c", 1);
    const SentencePair &p = corpus.pairs[0];
    {
      Store store(dir.path(), Typology::Default(), FixedClock());
      store.import_corpus(corpus);
      CHECK(store.task("c-0").state == TaskState::kUnassigned);
      store.assign("c-0", {"a", "b", "c"});
      CHECK(store.pending_tasks("a").size() == 1);
      CHECK(store.pending_tasks("j").empty());
      for (const char *who : {"a", "b", "c"}) {
        AnnotationRecord r = record(who, "c-0", Stage::kSelection, {OldDeletion(p)});
        r.submitted_at.clear();
        store.submit(r);
      }
      store.assign_adjudicator("c-0", "j");
      store.submit(record("j", "c-0", Stage::kAdjudication, {OldDeletion(p)}));
      store.start_classification("c-0");
      CHECK_THROWS_AS(store.aggregate_final("c-0"), WorkflowError);
      int rating = 1;
      for (const char *who : {"a", "b", "c"}) {
        store.submit(record(who, "c-0", Stage::kClassification, {classified(OldDeletion(p), quality("generalization", rating++))}));
      }
      CHECK(store.task("c-0").state == TaskState::kComplete);
    }
    Store store(dir.path(), Typology::Default(), FixedClock());
    CHECK(store.task("c-0").state == TaskState::kComplete);
    CHECK(store.records().size() == 7);
    CHECK(store.records()[0].submitted_at == "2026-02-03T04:05:06Z");
    const auto merged = store.aggregate_final("c-0");
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].classification->rating == 2);
    const json exported = store.export_dataset();
    REQUIRE(exported["aggregated"].size() == 1);
    CHECK(exported["aggregated"][0]["pair_id"] == "c-0");
    CHECK(fs::exists(dir.path() / "records" / "c-0" / "selection" / "a" / "1.json"));
  }

  TEST_CASE("invalid edits are rejected before anything is written") {
    TempDir dir;
    Store store(dir.path());
    const Corpus corpus = TinyCorpus("c", 1);
    store.import_corpus(corpus);
    store.assign("c-0", {"a", "b", "c"});
    Edit bad = make_edit("x", Operation::kDeletion, {{Side::kComplex, 0, 500}});
    try {
      store.submit(record("a", "c-0", Stage::kSelection, {bad}));
      FAIL("expected ValidationFailed");
    } catch (const ValidationFailed &e) {
      CHECK_FALSE(e.violations().empty());
    }
    Edit classified_selection = classified(OldDeletion(corpus.pairs[0]), quality("generalization", 1));
    try {
      store.submit(record("a", "c-0", Stage::kSelection, {classified_selection}));
      FAIL("expected ValidationFailed");
    } catch (const ValidationFailed &e) {
      CHECK(e.violations().front().code == "unexpected-classification");
    }
    CHECK(store.records().empty());
    CHECK(store.task("c-0").received.empty());
    CHECK(store.task("c-0").revisions.empty());
    CHECK_FALSE(fs::exists(dir.path() / "records" / "c-0"));
  }

  TEST_CASE("stale revisions conflict") {
    TempDir dir;
    Store store(dir.path());
    store.import_corpus(TinyCorpus("c", 1));
    store.assign("c-0", {"a", "b", "c"});
    store.submit(record("a", "c-0", Stage::kSelection, {}));
    CHECK_THROWS_AS(store.submit(record("a", "c-0", Stage::kSelection, {})), ConflictError);
    CHECK_THROWS_AS(store.submit(record("z", "c-0", Stage::kSelection, {})), UnassignedAnnotator);
    store.submit(record("a", "c-0", Stage::kSelection, {}, 2));
    CHECK(store.records_for("c-0").size() == 2);
  }
}

TEST_SUITE("store diagnostics") {
  TEST_CASE("every corrupt file is reported") {
    TempDir dir;
    {
      Store store(dir.path());
      store.import_corpus(TinyCorpus("c", 2));
      store.assign("c-0", {"a", "b", "c"});
      store.submit(record("a", "c-0", Stage::kSelection, {}));
    }
    std::ofstream(dir.path() / "tasks" / "c-1.json") << "{not json";
    std::ofstream(dir.path() / "records" / "c-0" / "selection" / "a" / "1.json") << R"({"annotator": "a"})";
    json orphan = record_to_json(record("a", "ghost", Stage::kSelection, {}));
    fs::create_directories(dir.path() / "records" / "ghost" / "selection" / "a");
    write_json_file(dir.path() / "records" / "ghost" / "selection" / "a" / "1.json", orphan);
    try {
      Store store(dir.path());
      FAIL("expected StoreError");
    } catch (const StoreError &e) {
      const std::string msg = e.what();
      CHECK(msg.find("3 problem(s)") != std::string::npos);
      CHECK(msg.find("c-1.json") != std::string::npos);
      CHECK(msg.find("/records/c-0/selection/a/1.json") != std::string::npos);
      CHECK(msg.find("unknown pair 'ghost'") != std::string::npos);
    }
  }

  TEST_CASE("task files breaking workflow invariants are reported") {
    TempDir dir;
    {
      Store store(dir.path());
      store.import_corpus(TinyCorpus("c", 1));
    }
    json t = read_json_file(dir.path() / "tasks" / "c-0.json");
    t["state"] = "complete";
    write_json_file(dir.path() / "tasks" / "c-0.json", t);
    CHECK_THROWS_AS(Store(dir.path()), StoreError);
  }

  TEST_CASE("a file in place of the root") {
    TempDir dir;
    std::ofstream(dir.path() / "file") << "x";
    CHECK_THROWS_AS(Store(dir.path() / "file"), StoreError);
  }
}

TEST_SUITE("store concurrency") {
  TEST_CASE("parallel submissions across and within tasks") {
    TempDir dir;
    Store store(dir.path());
    const Corpus corpus = TinyCorpus("c", 16);
    store.import_corpus(corpus);
    for (const SentencePair &p : corpus.pairs) store.assign(p.id, {"a", "b", "c"});

    std::vector<std::thread> threads;
    std::atomic<int> conflicts{0}, accepted{0};
    for (const char *who : {"a", "b", "c"}) {
      for (int copy = 0; copy < 2; ++copy) {
        threads.emplace_back([&, who] {
          for (const SentencePair &p : corpus.pairs) {
            try {
              store.submit(record(who, p.id, Stage::kSelection, {OldDeletion(p)}));
              ++accepted;
            } catch (const ConflictError &) {
              ++conflicts;
            }
            (void)store.tasks();
            (void)store.export_dataset();
          }
        });
      }
    }
    for (std::thread &t : threads) t.join();
    CHECK(accepted == 48);
    CHECK(conflicts == 48);
    for (const SentencePair &p : corpus.pairs) {
      CHECK(store.task(p.id).state == TaskState::kAwaitingAdjudication);
      CHECK(store.records_for(p.id).size() == 3);
    }
    Store reloaded(dir.path());
    CHECK(reloaded.export_dataset() == store.export_dataset());
  }
}
