#include "gtensor/tensor.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gtensor {

void write_tensor(std::ostream& out, const SparseTensor& t) {
  out << "t " << t.order();
  for (auto d : t.dims()) out << " " << d;
  out << "\n";
  for (const auto& [idx, c] : t.entries()) {
    for (auto i : idx) out << i + 1 << " ";
    out << to_fraction_string(c) << "\n";
  }
}

SparseTensor read_tensor(std::istream& in) {
  std::string line;
  std::optional<SparseTensor> t;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("tensor line " + std::to_string(lineno) + ": " + what);
    };
    if (!t) {
      std::string tag;
      std::size_t d = 0;
      if (!(ls >> tag >> d) || tag != "t") fail("expected header 't <d> <dims...>'");
      std::vector<std::uint64_t> dims(d);
      for (auto& x : dims)
        if (!(ls >> x) || x == 0) fail("bad mode dimension");
      t = SparseTensor(dims);
      continue;
    }
    Index idx(t->order());
    for (auto& i : idx) {
      std::uint64_t one_based = 0;
      if (!(ls >> one_based) || one_based == 0) fail("bad index");
      i = one_based - 1;
    }
    std::string c;
    if (!(ls >> c)) fail("missing coefficient");
    try {
      t->add(idx, parse_rational(c));
    } catch (const std::exception& ex) {
      fail(ex.what());
    }
  }
  if (!t) throw std::invalid_argument("tensor: missing header");
  return *t;
}

}  // namespace gtensor
