#include <doctest.h>

#include "support.hpp"
#include "uvleak/circuit.hpp"
#include "uvleak/validate.hpp"

using namespace uvleak;

namespace {

const char* kIsa = R"(circuit sISA {
  reg pc = 0; reg reg = 0; mem m[16];
  pc <= pc + 1;
  reg <= reg + m[pc];
  output reg;
  init pc == 0 && reg == 0;
})";

bool mentions(const Diagnostics& ds, const std::string& text) {
  for (const auto& d : ds)
    if (d.message.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("values print and parse") {
  CHECK(Value::of(42).str() == "42");
  CHECK(Value::bottom().str() == "bot");
  CHECK(Value::parse("bot") == Value::bottom());
  CHECK(Value::parse("17") == Value::of(17));
  CHECK_FALSE(Value::parse("x1").has_value());
  CHECK(Value::of(0x1ff).truncated(8) == Value::of(0xff));
  CHECK(Value::bottom().truncated(8) == Value::bottom());
  CHECK_FALSE(Value::bottom().truthy());
  CHECK_FALSE(Value::of(0).truthy());
  CHECK(Value::of(3).truthy());
  CHECK(Value::of(0) != Value::bottom());
}

TEST_CASE("expression structure") {
  ExprPtr a = build::eq(build::id("x"), build::num(1));
  ExprPtr b = build::eq(build::id("x"), build::num(1));
  CHECK(structurally_equal(a, b));
  CHECK_FALSE(structurally_equal(a, build::eq(build::id("y"), build::num(1))));

  ExprPtr e = build::land(build::id("x"), Expr::array_read("m", build::id("i")));
  std::set<std::string> ids;
  collect_identifiers(*e, ids);
  CHECK(ids == std::set<std::string>{"x", "m", "i"});

  ExprPtr r = rename_identifiers(e, [](const std::string& n) { return n + ".1"; });
  ids.clear();
  collect_identifiers(*r, ids);
  CHECK(ids == std::set<std::string>{"x.1", "m.1", "i.1"});

  ExprPtr s = substitute(e, [](const std::string& n) { return n == "x" ? build::num(7) : nullptr; });
  ids.clear();
  collect_identifiers(*s, ids);
  CHECK(ids == std::set<std::string>{"m", "i"});
}

TEST_CASE("sISA validates cleanly") {
  Circuit c = parse_circuit(kIsa);
  CHECK(validate(c).empty());
  CHECK(c.find_register("m")->is_array());
  CHECK(c.find_register("m")->cells() == 16);
  CHECK(c.register_names() == std::vector<std::string>{"pc", "reg", "m"});
}

TEST_CASE("duplicate left-hand side is reported") {
  Circuit c = parse_circuit("reg pc = 0; pc <= pc + 1; pc <= 3;");
  Diagnostics d = validate(c);
  CHECK(has_errors(d));
  CHECK(mentions(d, "duplicate left-hand side pc"));
}

TEST_CASE("combinational wire cycle is reported") {
  Circuit c = parse_circuit("wire a = b; wire b = a; output a;");
  Diagnostics d = validate(c);
  CHECK(has_errors(d));
  CHECK(mentions(d, "combinational cycle"));
  CHECK(format_diagnostics(d).find("error") != std::string::npos);
}

TEST_CASE("undeclared identifiers and bad outputs are reported") {
  CHECK(has_errors(validate(parse_circuit("reg x = 0; x <= y;"))));
  CHECK(has_errors(validate(parse_circuit("reg x = 0; output z;"))));
  CHECK(has_errors(validate(parse_circuit("wire w = 1; w <= 2;"))));
}

TEST_CASE("read and write sets") {
  ReadWriteSets isa = read_write_sets(parse_circuit(kIsa));
  CHECK(isa.reads == std::set<std::string>{"pc", "reg", "m"});
  CHECK(isa.writes == std::set<std::string>{"pc", "reg"});

  ReadWriteSets empty = read_write_sets(Circuit{});
  CHECK(empty.reads.empty());
  CHECK(empty.writes.empty());

  ReadWriteSets k = read_write_sets(parse_circuit("reg x = 0; x <= 5;"));
  CHECK(k.reads.empty());
  CHECK(k.writes == std::set<std::string>{"x"});
}

TEST_CASE("vars") {
  CHECK(vars(parse_circuit(kIsa)) == std::set<std::string>{"pc", "reg", "m"});
  CHECK(vars(Circuit{}).empty());
  Design d = fixture::design("simp.uv");
  CHECK(vars(*d.find_circuit("sIMP")) == std::set<std::string>{"pc", "reg", "m", "st", "res", "ret"});
}

TEST_CASE("register partition") {
  Design d = fixture::design("simp.uv");
  const Circuit& imp = *d.find_circuit("sIMP");
  CHECK(check_partition(imp, {"pc", "reg", "m"}, {"st", "res", "ret"}).empty());
  CHECK(has_errors(check_partition(imp, {"pc", "reg", "m", "st"}, {"st", "res", "ret"})));
  CHECK(has_errors(check_partition(imp, {"pc", "reg"}, {"st", "res", "ret"})));
}

TEST_CASE("circuit structural equality") {
  CHECK(structurally_equal(parse_circuit(kIsa), parse_circuit(kIsa)));
  Circuit other = parse_circuit(kIsa);
  other.outputs = {"pc"};
  CHECK_FALSE(structurally_equal(parse_circuit(kIsa), other));
}
