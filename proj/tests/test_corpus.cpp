#include <gtest/gtest.h>

#include "hopl/corpus.hpp"

namespace hopl {
namespace {

const std::vector<CorpusCase>& corpus() {
  static const std::vector<CorpusCase> cases = load_corpus(HOPL_CORPUS_DIR);
  return cases;
}

TEST(Corpus, HasAtLeastThirtyCasesWithAllCells) {
  ASSERT_GE(corpus().size(), 30u);
  for (const CorpusCase& c : corpus())
    for (Semantics s : kAllSemantics)
      for (ErrorMode m : kAllModes)
        EXPECT_TRUE(c.expect["cells"][to_string(s)].contains(to_string(m))) << c.name;
}

TEST(Corpus, EveryCaseNamesItsOracle) {
  for (const CorpusCase& c : corpus()) EXPECT_FALSE(c.expect.value("oracle", "").empty()) << c.name;
}

class CorpusCaseTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(CorpusCaseTest, MatchesExpectation) {
  const CorpusCase& c = corpus().at(GetParam());
  CaseRun run = run_case(c);
  ASSERT_TRUE(run.load_errors.empty()) << c.name << ": " << run.load_errors.front().message;
  for (const CellRun& cell : run.cells)
    for (const std::string& m : cell.mismatches) ADD_FAILURE() << c.name << " " << m;
}

INSTANTIATE_TEST_SUITE_P(All, CorpusCaseTest, ::testing::Range<std::size_t>(0, corpus().size()),
                         [](const ::testing::TestParamInfo<std::size_t>& info) {
                           return corpus().at(info.param).name;
                         });

}  // namespace
}  // namespace hopl
