#include <filesystem>

#include "bklattice/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bklat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "bklattice_test_io";
  fs::create_directories(dir);
  return dir;
}

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("model and operator files round-trip bitwise") {
  Rng rng(51);
  const fs::path dir = scratch_dir();
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + rng.index(0, 3), n = 1 + rng.index(0, 5);
    const Model model = bklat::testing::random_model(rng, k, n);
    io::save_model(dir / "m.json", model);
    CHECK(io::load_model(dir / "m.json") == model);

    const auto op = gen_contraction(model, GenMode::Signed, trial).op;
    io::save_operator(dir / "op.json", op, model);
    const auto loaded = io::load_operator(dir / "op.json");
    CHECK(loaded.model == model);
    CHECK(loaded.op == op);
    CHECK(loaded.op.flags().positive == false);
  }
}

TEST_CASE("trace CSV round-trips bitwise") {
  DichotomyTrace t;
  Rng rng(52);
  for (int n = 0; n < 30; ++n) t.d.push_back({rng.uniform(), rng.uniform() * 1e-200, 2.0, 0.1});
  const std::string csv = io::trace_to_csv(t);
  CHECK(csv.rfind("n,fiber,d\n0,0,", 0) == 0);
  CHECK(io::trace_from_csv(csv) == t.d);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(2.0) == "2");
  CHECK(error_code([] { io::trace_from_csv("n,fiber,x\n"); }) == Errc::ParseError);
  CHECK(error_code([] { io::trace_from_csv("n,fiber,d\n0,1,0.5\n"); }) == Errc::ParseError);
  CHECK(error_code([] { io::trace_from_csv("n,fiber,d\n0,0,abc\n"); }) == Errc::ParseError);
}

TEST_CASE("operator files may reference a model by relative path") {
  const fs::path dir = scratch_dir();
  const Model model = Model::uniform(2, 2);
  io::save_model(dir / "shared_model.json", model);
  auto j = io::operator_to_json(FiberedOperator::identity(2, 2), model);
  j["model"] = "shared_model.json";
  io::write_file_atomic(dir / "by_path.json", io::dump(j));
  const auto loaded = io::load_operator(dir / "by_path.json");
  CHECK(loaded.model == model);
  CHECK(loaded.op == FiberedOperator::identity(2, 2));
}

TEST_CASE("corrupt files are rejected") {
  const fs::path dir = scratch_dir();
  const Model model = Model::uniform(1, 2);
  auto j = io::model_to_json(model);

  auto bad = j;
  bad["measure"] = {{1.0, 0.0}};
  CHECK(error_code([&] { io::model_from_json(bad); }) == Errc::NonPositiveEntry);
  bad = j;
  bad["nabla_atom_count"] = 3;
  CHECK(error_code([&] { io::model_from_json(bad); }) == Errc::ShapeMismatch);
  bad = j;
  bad.erase("measure");
  CHECK(error_code([&] { io::model_from_json(bad); }) == Errc::ParseError);
  bad = j;
  bad["omega_atoms"][0]["id"] = 4;
  CHECK(error_code([&] { io::model_from_json(bad); }) == Errc::ParseError);

  auto op = io::operator_to_json(FiberedOperator({Matrix{{0.5, -0.5}, {0, 0}}}), model);
  op["flags"]["positive"] = true;
  CHECK(error_code([&] { io::operator_from_json(op); }) == Errc::InvalidArgument);
  op = io::operator_to_json(FiberedOperator::identity(1, 2), model);
  op["fibers"] = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  CHECK(error_code([&] { io::operator_from_json(op); }) == Errc::ShapeMismatch);

  io::write_file_atomic(dir / "garbage.json", "{ not json");
  CHECK(error_code([&] { io::load_model(dir / "garbage.json"); }) == Errc::ParseError);
  CHECK(error_code([&] { io::load_model(dir / "missing.json"); }) == Errc::IoError);
}

TEST_CASE("verdict JSON layout") {
  std::vector<FiberVerdict> v(2);
  v[0] = {0, Verdict::ConvergesToZero, 0u, 1e-12};
  v[1] = {1, Verdict::StuckAtTwo, std::nullopt, 2.0};
  const auto j = io::verdicts_to_json(v);
  CHECK(j[0]["verdict"] == "converges-to-zero");
  CHECK(j[0]["first_below_2"] == 0);
  CHECK(j[1]["first_below_2"].is_null());
  CHECK(j[1]["final_value"] == 2.0);
}
