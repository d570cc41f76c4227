#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "patsim/corpus.hpp"
#include "patsim/errors.hpp"
#include "support.hpp"

namespace patsim {
namespace {

using testing::data_dir;

const IngestColumns kColumns;

std::vector<CpcAssignment> fixture_cpc() {
  return read_cpc_table(open_lines(data_dir() / "ingest/cpc.tsv"), kColumns.cpc).collect();
}
std::vector<ApplicationRow> fixture_applications() {
  return read_application_table(open_lines(data_dir() / "ingest/application.tsv"), kColumns.application).collect();
}
std::vector<PatentRow> fixture_patents() {
  return read_patent_table(open_lines(data_dir() / "ingest/patent.tsv"), kColumns.patent).collect();
}

TEST(CpcAssignment, RepeatedPrefixLayout) {
  const auto a = make_cpc_assignment("P1", "A", "A61", "A61B", "A61B17/7097", "", "inventional");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->section, 'A');
  EXPECT_EQ(a->cpc_class, "61");
  EXPECT_EQ(a->subclass, 'B');
  EXPECT_EQ(a->group, "17");
  EXPECT_EQ(a->subgroup, "7097");
  EXPECT_EQ(a->full_symbol(), "A61B17/7097");
  EXPECT_EQ(a->type, AssignmentType::Inventional);
}

TEST(CpcAssignment, SplitColumnLayout) {
  const auto a = make_cpc_assignment("P1", "H", "04", "L", "9", "32", "additional");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->full_symbol(), "H04L9/32");
  EXPECT_EQ(a->type, AssignmentType::Additional);
}

TEST(CpcAssignment, RejectsInvalidParts) {
  EXPECT_FALSE(make_cpc_assignment("P", "Z", "61", "B", "17", "70", "inventional"));   // section
  EXPECT_FALSE(make_cpc_assignment("P", "A", "6", "B", "17", "70", "inventional"));    // class width
  EXPECT_FALSE(make_cpc_assignment("P", "A", "61", "b", "17", "70", "inventional"));   // subclass case
  EXPECT_FALSE(make_cpc_assignment("P", "A", "61", "B", "1x", "70", "inventional"));   // group digits
  EXPECT_FALSE(make_cpc_assignment("P", "A", "61", "B", "17", "70", "sometimes"));     // type
  EXPECT_TRUE(make_cpc_assignment("P", "Y", "02", "E", "10", "50", "inventional"));
}

TEST(CpcAssignment, ParseSymbolRoundTrips) {
  const auto a = parse_cpc_symbol("C07K14/475");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->full_symbol(), "C07K14/475");
  EXPECT_FALSE(parse_cpc_symbol("C07K14"));
}

TEST(IndependentClaim, EmptyDependencyAndNoReference) {
  EXPECT_TRUE(is_independent_claim("", "A device comprising a housing."));
  EXPECT_TRUE(is_independent_claim("NULL", "A device comprising a housing."));
}

TEST(IndependentClaim, TextualReference) {
  EXPECT_FALSE(is_independent_claim("", "The device of claim 1, wherein the housing is sealed."));
  EXPECT_FALSE(is_independent_claim("", "The device of Claim 12."));
}

TEST(IndependentClaim, DependencyColumn) {
  EXPECT_FALSE(is_independent_claim("claim 1", "The device as above."));
}

TEST(IndependentClaim, ReferenceBeyondWindowIsIgnored) {
  const std::string text = std::string(210, 'x') + " claim 3";
  EXPECT_TRUE(is_independent_claim("", text));
  EXPECT_FALSE(is_independent_claim("", std::string(150, 'x') + " claim 3"));
}

TEST(IndependentClaim, WordClaimWithoutNumberIsNotAReference) {
  EXPECT_TRUE(is_independent_claim("", "A method to claim priority comprising sending a request."));
}

TEST(ParseClaims, FixtureHasSixIndependentClaims) {
  auto reader = parse_claims(open_lines(data_dir() / "ingest/claims.tsv"), kColumns.claims);
  const auto claims = reader.collect();
  ASSERT_EQ(claims.size(), 10u);
  const auto independent = std::count_if(claims.begin(), claims.end(), [](const auto& c) { return c.is_independent; });
  EXPECT_EQ(independent, 6);
  std::vector<std::string> dependent;
  for (const auto& c : claims)
    if (!c.is_independent) dependent.push_back(c.key());
  EXPECT_EQ(dependent, (std::vector<std::string>{"A1:2", "B1:2", "B1:3", "C1:2"}));
  EXPECT_EQ(claims[6].claim_sequence, 4);
  EXPECT_EQ(claims[6].patent_id, "B1");
}

TEST(ParseClaims, SequenceMustBePositive) {
  std::istringstream in("pgpub_id\tclaim_sequence\tclaim_text\tdependent\nA\t0\tA thing.\t\nA\t1\tA thing.\t\n");
  auto reader = parse_claims(stream_lines(in), kColumns.claims);
  EXPECT_EQ(reader.collect().size(), 1u);
  EXPECT_EQ(reader.counters().malformed, 1u);
}

TEST(BuildCleanCorpus, FixtureStageCounters) {
  const auto corpus = build_clean_corpus(fixture_cpc(), fixture_applications(), fixture_patents());
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_TRUE(corpus.find("P5"));
  EXPECT_TRUE(corpus.find("P6"));
  const auto& p = corpus.provenance();
  EXPECT_EQ(p.get("input_patents"), 6u);
  EXPECT_EQ(p.get("dual"), 1u);
  EXPECT_EQ(p.get("non_inventional"), 1u);
  EXPECT_EQ(p.get("non_utility"), 1u);
  EXPECT_EQ(p.get("no_abstract"), 1u);
  EXPECT_EQ(p.get("no_filing_date"), 0u);
  EXPECT_EQ(p.get("missing_patent_row"), 0u);
  EXPECT_EQ(p.get("clean"), 2u);
}

TEST(BuildCleanCorpus, RecordFields) {
  const auto corpus = build_clean_corpus(fixture_cpc(), fixture_applications(), fixture_patents());
  const auto& r = corpus.at("P5");
  EXPECT_EQ(r.filing_date, (Date{2008, 5, 5}));
  EXPECT_EQ(r.filing_year, 2008);
  EXPECT_EQ(r.abstract, "A pedicle screw having a polyaxial head.");
  EXPECT_EQ(r.cpc.size(), 1u);
  EXPECT_EQ(r.primary_cpc().full_symbol(), "A61B17/7097");
  EXPECT_THROW(corpus.at("P1"), ContractError);
}

TEST(BuildCleanCorpus, ProvenanceRendersAsKeyValueLines) {
  const auto corpus = build_clean_corpus(fixture_cpc(), fixture_applications(), fixture_patents());
  EXPECT_EQ(corpus.provenance().render(),
            "input_patents=6\ndual=1\nnon_inventional=1\nno_filing_date=0\nmissing_patent_row=0\n"
            "non_utility=1\nno_abstract=1\nclean=2\n");
}

TEST(BuildCleanCorpus, TwoInventionalCodesExclude) {
  const std::vector<CpcAssignment> cpc = {
      *make_cpc_assignment("X", "A", "61", "B", "17", "70", "inventional"),
      *make_cpc_assignment("X", "A", "61", "B", "17", "80", "inventional")};
  const std::vector<ApplicationRow> apps = {{"X", {2010, 1, 1}}};
  const std::vector<PatentRow> patents = {{"X", PatentType::Utility, "text"}};
  const auto corpus = build_clean_corpus(cpc, apps, patents);
  EXPECT_TRUE(corpus.empty());
  EXPECT_EQ(corpus.provenance().get("dual"), 1u);
}

TEST(BuildCleanCorpus, RepeatedIdenticalCpcRowCountsOnce) {
  const auto a = *make_cpc_assignment("X", "A", "61", "B", "17", "70", "inventional");
  const std::vector<CpcAssignment> cpc = {a, a};
  const std::vector<ApplicationRow> apps = {{"X", {2010, 1, 1}}};
  const std::vector<PatentRow> patents = {{"X", PatentType::Utility, "text"}};
  EXPECT_EQ(build_clean_corpus(cpc, apps, patents).size(), 1u);
}

TEST(BuildCleanCorpus, ConflictingAbstractsNameTheId) {
  const std::vector<CpcAssignment> cpc = {*make_cpc_assignment("X7", "A", "61", "B", "17", "70", "inventional")};
  const std::vector<ApplicationRow> apps = {{"X7", {2010, 1, 1}}};
  const std::vector<PatentRow> patents = {{"X7", PatentType::Utility, "one"}, {"X7", PatentType::Utility, "two"}};
  try {
    build_clean_corpus(cpc, apps, patents);
    FAIL() << "expected IngestConflict";
  } catch (const IngestConflict& e) {
    EXPECT_EQ(e.id(), "X7");
    EXPECT_NE(std::string(e.what()).find("X7"), std::string::npos);
  }
}

TEST(BuildCleanCorpus, ConflictingFilingDates) {
  const std::vector<CpcAssignment> cpc = {*make_cpc_assignment("X", "A", "61", "B", "17", "70", "inventional")};
  const std::vector<ApplicationRow> apps = {{"X", {2010, 1, 1}}, {"X", {2011, 1, 1}}};
  const std::vector<PatentRow> patents = {{"X", PatentType::Utility, "one"}};
  EXPECT_THROW(build_clean_corpus(cpc, apps, patents), IngestConflict);
}

TEST(BuildCleanCorpus, MissingJoinsAreCounted) {
  const std::vector<CpcAssignment> cpc = {*make_cpc_assignment("X", "A", "61", "B", "17", "70", "inventional"),
                                          *make_cpc_assignment("Y", "A", "61", "B", "17", "70", "inventional")};
  const std::vector<ApplicationRow> apps = {{"Y", {2010, 1, 1}}};
  const auto corpus = build_clean_corpus(cpc, apps, {});
  EXPECT_EQ(corpus.provenance().get("no_filing_date"), 1u);
  EXPECT_EQ(corpus.provenance().get("missing_patent_row"), 1u);
}

TEST(BuildCleanCorpus, InputOrderDoesNotMatter) {
  auto cpc = fixture_cpc();
  auto apps = fixture_applications();
  auto patents = fixture_patents();
  const auto reference = build_clean_corpus(cpc, apps, patents);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(cpc.begin(), cpc.end(), rng);
    std::shuffle(apps.begin(), apps.end(), rng);
    std::shuffle(patents.begin(), patents.end(), rng);
    const auto shuffled = build_clean_corpus(cpc, apps, patents);
    EXPECT_EQ(shuffled.records(), reference.records());
    EXPECT_EQ(shuffled.provenance(), reference.provenance());
  }
}

TEST(BuildCleanCorpus, Idempotent) {
  const auto first = build_clean_corpus(fixture_cpc(), fixture_applications(), fixture_patents());
  std::vector<CpcAssignment> cpc;
  std::vector<ApplicationRow> apps;
  std::vector<PatentRow> patents;
  for (const auto& [id, r] : first.records()) {
    cpc.push_back(r.primary_cpc());
    apps.push_back({id, r.filing_date});
    patents.push_back({id, PatentType::Utility, r.abstract});
  }
  const auto second = build_clean_corpus(cpc, apps, patents);
  EXPECT_EQ(second.records(), first.records());
}

TEST(CorpusFile, RoundTrip) {
  const auto corpus = build_clean_corpus(fixture_cpc(), fixture_applications(), fixture_patents());
  std::ostringstream out;
  write_corpus(out, corpus);
  EXPECT_EQ(out.str(),
            "PATSIM-CORPUS v1\tcount=2\n"
            "P5\t2008-05-05\tA61B17/7097\tA pedicle screw having a polyaxial head.\n"
            "P6\t2008-06-10\tA61B17/7097\tA rod connector for spinal fixation systems.\n");
  std::istringstream in(out.str());
  auto source = stream_lines(in);
  const auto back = read_corpus(*source);
  ASSERT_EQ(back.size(), 2u);
  for (const auto& [id, r] : corpus.records()) {
    const auto& b = back.at(id);
    EXPECT_EQ(b.filing_date, r.filing_date);
    EXPECT_EQ(b.abstract, r.abstract);
    EXPECT_EQ(b.primary_cpc().full_symbol(), r.primary_cpc().full_symbol());
  }
}

TEST(CorpusFile, CountMismatchIsFormatError) {
  std::istringstream in("PATSIM-CORPUS v1\tcount=2\nP5\t2008-05-05\tA61B17/7097\ttext\n");
  auto source = stream_lines(in);
  EXPECT_THROW(read_corpus(*source), FormatError);
}

}  // namespace
}  // namespace patsim
