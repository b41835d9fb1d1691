#include "usat/runner.hpp"

#include <gtest/gtest.h>

#include "usat/error.hpp"

namespace usat {
namespace {

const std::string kRunner = USAT_AFFINE_RUNNER;

TEST(Protocol, EncodeRequest) {
  EXPECT_EQ(encode_run_request(3, {{"PAR-1", 0.5}, {"PAR-2", -2}}),
            R"({"run":3,"factors":{"PAR-1":0.5,"PAR-2":-2.0}})");
}

TEST(Protocol, DecodeResponse) {
  EXPECT_EQ(decode_run_response("{\"metrics\":{\"m\":1.5,\"n\":-2}}\n"),
            (std::map<std::string, double>{{"m", 1.5}, {"n", -2}}));
  for (const char* bad : {"", "not json", "{\"metrics\":1}", "{\"metrics\":{\"m\":\"x\"}}", "{\"m\":1}",
                          "{\"metrics\":{},\"extra\":1}", "[1]", "{\"metrics\":{}}\n{\"metrics\":{}}\n"})
    EXPECT_THROW(decode_run_response(bad), RunnerProtocolError) << bad;
}

TEST(SubprocessRunner, EvaluatesAffineModel) {
  const SubprocessRunner r(kRunner + " --metric m=1,a=2,b=-1");
  const auto out = r.run(0, {{"a", 3}, {"b", 0.5}});
  ASSERT_TRUE(out.ok) << out.diagnostics;
  EXPECT_EQ(out.metrics, (std::map<std::string, double>{{"m", 6.5}}));
}

TEST(SubprocessRunner, NonzeroExitIsFailureWithStderr) {
  const SubprocessRunner r(kRunner + " --metric m=0 --fail-run 1 --stderr 'solver diverged'");
  EXPECT_TRUE(r.run(0, {}).ok);
  const auto out = r.run(1, {});
  EXPECT_FALSE(out.ok);
  EXPECT_NE(out.diagnostics.find("solver diverged"), std::string::npos) << out.diagnostics;
}

TEST(SubprocessRunner, MalformedOutputIsProtocolFailure) {
  const SubprocessRunner r(kRunner + " --metric m=0 --malformed-run 0");
  const auto out = r.run(0, {});
  EXPECT_FALSE(out.ok);
  EXPECT_NE(out.diagnostics.find("protocol error"), std::string::npos);
}

TEST(SubprocessRunner, MissingExecutable) {
  const SubprocessRunner r("/nonexistent/model-runner");
  const auto out = r.run(0, {{"a", 1}});
  EXPECT_FALSE(out.ok);
}

TEST(SubprocessRunner, RunnerIgnoringStdinStillWorks) {
  const SubprocessRunner r("echo '{\"metrics\":{\"m\":4}}'");
  const auto out = r.run(0, {{"a", 1}});
  ASSERT_TRUE(out.ok) << out.diagnostics;
  EXPECT_EQ(out.metrics.at("m"), 4);
}

TEST(AffineRunner, FromSpec) {
  const auto r = AffineRunner::from_spec("delay:0.5,PAR-1=2,PAR-2=-1;error:0,PAR-1=1");
  const auto out = r.run(0, {{"PAR-1", 1}, {"PAR-2", 4}});
  ASSERT_TRUE(out.ok);
  EXPECT_EQ(out.metrics, (std::map<std::string, double>{{"delay", -1.5}, {"error", 1}}));
  for (const char* bad : {"", "m", "m:x", "m:0,a", "m:0,a=b", "m:0;m:1"})
    EXPECT_THROW(AffineRunner::from_spec(bad), InvalidArgument) << bad;
}

}  // namespace
}  // namespace usat
