#include "isl/params_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "isl/problems.hpp"
#include "format.hpp"

namespace isl {

namespace {

constexpr char kMagic[] = "islparams";
constexpr int kVersion = 1;

std::string fmt(double v) { return detail::g17(v); }

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_num(const std::string& origin, int lineno, const std::string& text) {
  T out{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    fail(origin, lineno, "invalid number '" + text + "'");
  return out;
}

} // namespace

void save_params(const StoredPolicy& stored, std::ostream& out) {
  out << kMagic << ' ' << kVersion << '\n';
  if (stored.direct) {
    out << "kind vector\n";
    out << "dim " << stored.dim << '\n';
  } else {
    out << "kind policy\n";
    out << "obs " << stored.spec.obs_dim << '\n';
    out << "act " << stored.spec.act_dim << '\n';
    out << "hidden ";
    if (stored.spec.hidden.empty()) {
      out << "none";
    } else {
      for (std::size_t i = 0; i < stored.spec.hidden.size(); ++i)
        out << (i ? "," : "") << stored.spec.hidden[i];
    }
    out << '\n';
    out << "activation "
        << (stored.spec.activation == Activation::Relu ? "relu" : "tanh")
        << '\n';
  }
  const Vector flat = flatten(stored.params);
  out << "count " << flat.size() << '\n';
  for (Index i = 0; i < flat.size(); ++i) out << fmt(flat(i)) << '\n';
}

void save_params_file(const StoredPolicy& stored, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write params file '" + path + "'");
  save_params(stored, out);
}

StoredPolicy load_params(std::istream& in, const std::string& origin) {
  int lineno = 0;
  auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line))
      fail(origin, lineno, std::string("unexpected end of file, wanted ") + what);
    ++lineno;
    return line;
  };
  auto field = [&](const std::string& line, const std::string& key) {
    if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
        line[key.size()] != ' ')
      fail(origin, lineno, "expected '" + key + " <value>', got '" + line + "'");
    return line.substr(key.size() + 1);
  };

  {
    std::istringstream header(next_line("header"));
    std::string magic;
    int version = 0;
    if (!(header >> magic >> version) || magic != kMagic)
      fail(origin, lineno, "not a params file (bad header)");
    if (version != kVersion)
      fail(origin, lineno,
           "unsupported version " + std::to_string(version));
  }

  StoredPolicy stored;
  const std::string kind = field(next_line("kind"), "kind");
  std::vector<LayerShape> shapes;
  if (kind == "vector") {
    stored.direct = true;
    stored.dim = parse_num<Index>(origin, lineno, field(next_line("dim"), "dim"));
    if (stored.dim < 1) fail(origin, lineno, "dim must be >= 1");
    shapes = {{1, stored.dim, false}};
  } else if (kind == "policy") {
    stored.spec.obs_dim =
        parse_num<Index>(origin, lineno, field(next_line("obs"), "obs"));
    stored.spec.act_dim =
        parse_num<Index>(origin, lineno, field(next_line("act"), "act"));
    const std::string hidden = field(next_line("hidden"), "hidden");
    stored.spec.hidden.clear();
    if (hidden != "none") {
      std::istringstream hs(hidden);
      std::string part;
      while (std::getline(hs, part, ','))
        stored.spec.hidden.push_back(parse_num<Index>(origin, lineno, part));
    }
    const std::string act = field(next_line("activation"), "activation");
    if (act == "tanh") stored.spec.activation = Activation::Tanh;
    else if (act == "relu") stored.spec.activation = Activation::Relu;
    else fail(origin, lineno, "activation must be tanh or relu");
    try {
      stored.spec.validate();
    } catch (const std::invalid_argument& e) {
      fail(origin, lineno, e.what());
    }
    shapes = layer_shapes(stored.spec);
  } else {
    fail(origin, lineno, "kind must be policy or vector, got '" + kind + "'");
  }

  const Index count =
      parse_num<Index>(origin, lineno, field(next_line("count"), "count"));
  if (count != param_count(shapes))
    fail(origin, lineno,
         "count " + std::to_string(count) + " does not match the declared "
         "shape (" + std::to_string(param_count(shapes)) + " parameters)");

  Vector flat(count);
  for (Index i = 0; i < count; ++i) {
    const std::string line = next_line("a parameter value");
    const char* begin = line.data();
    const char* end = begin + line.size();
    const auto [ptr, ec] = std::from_chars(begin, end, flat(i));
    if (ec != std::errc{} || ptr != end)
      fail(origin, lineno, "invalid parameter value '" + line + "'");
  }
  stored.params = unflatten(shapes, flat);
  return stored;
}

StoredPolicy load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file '" + path + "'");
  return load_params(in, path);
}

} // namespace isl
