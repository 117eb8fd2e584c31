#include "gtensor/circuit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gtensor {

const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::Input: return "input";
    case GateKind::Constant: return "const";
    case GateKind::Add: return "add";
    case GateKind::Mul: return "mul";
  }
  return "?";
}

GateId Circuit::append(Gate g, bool check_order) {
  if (check_order)
    for (const auto& w : g.inputs)
      if (w.source >= gates_.size()) throw std::invalid_argument("wire from a gate that does not exist yet");
  if (g.kind == GateKind::Input || g.kind == GateKind::Constant)
    if (!g.inputs.empty()) throw std::invalid_argument("input and constant gates take no wires");
  wires_ += g.inputs.size();
  gates_.push_back(std::move(g));
  return gates_.size() - 1;
}

GateId Circuit::input(std::size_t mode, std::uint64_t index) {
  if (mode >= mode_dims_.size() || index >= mode_dims_[mode])
    throw std::out_of_range("input gate outside the declared modes");
  auto key = std::make_pair(mode, index);
  if (auto it = input_cache_.find(key); it != input_cache_.end()) return it->second;
  Gate g;
  g.kind = GateKind::Input;
  g.mode = mode;
  g.index = index;
  GateId id = append(std::move(g), true);
  input_cache_[key] = id;
  return id;
}

GateId Circuit::constant(const Rational& c) {
  Gate g;
  g.kind = GateKind::Constant;
  g.constant = c;
  return append(std::move(g), true);
}

GateId Circuit::add(std::vector<Wire> in) {
  Gate g;
  g.kind = GateKind::Add;
  g.inputs = std::move(in);
  return append(std::move(g), true);
}

GateId Circuit::mul(std::vector<Wire> in) {
  Gate g;
  g.kind = GateKind::Mul;
  g.inputs = std::move(in);
  return append(std::move(g), true);
}

void Circuit::add_output(GateId g) {
  if (g >= gates_.size()) throw std::out_of_range("output gate does not exist");
  outputs_.push_back(g);
}

GateId Circuit::push(Gate g) {
  if (g.kind == GateKind::Input) {
    auto key = std::make_pair(g.mode, g.index);
    input_cache_.try_emplace(key, gates_.size());
  }
  return append(std::move(g), false);
}

std::vector<GateId> topological_order(const Circuit& c) {
  const auto& gs = c.gates();
  std::vector<std::size_t> indeg(gs.size(), 0);
  std::vector<std::vector<GateId>> succ(gs.size());
  for (GateId i = 0; i < gs.size(); ++i)
    for (const auto& w : gs[i].inputs) {
      if (w.source >= gs.size()) throw std::invalid_argument("wire from unknown gate");
      ++indeg[i];
      succ[w.source].push_back(i);
    }
  std::vector<GateId> order, ready;
  for (GateId i = gs.size(); i-- > 0;)
    if (indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    GateId x = ready.back();
    ready.pop_back();
    order.push_back(x);
    for (GateId y : succ[x])
      if (--indeg[y] == 0) ready.push_back(y);
  }
  if (order.size() != gs.size()) throw std::invalid_argument("circuit has a cycle");
  return order;
}

std::size_t count_wires(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& g : c.gates()) n += g.inputs.size();
  return n;
}

namespace {

bool builder_ordered(const Circuit& c) {
  for (GateId i = 0; i < c.gates().size(); ++i)
    for (const auto& w : c.gates()[i].inputs)
      if (w.source >= i) return false;
  return true;
}

}  // namespace

std::vector<Rational> evaluate_circuit(const Circuit& c, const std::vector<Vec>& inputs) {
  const auto& gs = c.gates();
  std::vector<GateId> order;
  if (builder_ordered(c)) {
    order.resize(gs.size());
    for (GateId i = 0; i < gs.size(); ++i) order[i] = i;
  } else {
    order = topological_order(c);
  }
  std::vector<Rational> val(gs.size());
  for (GateId i : order) {
    const Gate& g = gs[i];
    switch (g.kind) {
      case GateKind::Input:
        if (g.mode >= inputs.size() || g.index >= inputs[g.mode].size())
          throw std::invalid_argument("missing input x^(" + std::to_string(g.mode) + ")_" +
                                      std::to_string(g.index));
        val[i] = inputs[g.mode][g.index];
        break;
      case GateKind::Constant:
        val[i] = g.constant;
        break;
      case GateKind::Add: {
        Rational s = 0;
        for (const auto& w : g.inputs)
          if (w.label == 1)
            s += val[w.source];
          else
            s += w.label * val[w.source];
        val[i] = s;
        break;
      }
      case GateKind::Mul: {
        Rational p = 1;
        for (const auto& w : g.inputs) {
          if (w.label == 1)
            p *= val[w.source];
          else
            p *= w.label * val[w.source];
          if (p == 0) break;
        }
        val[i] = p;
        break;
      }
    }
  }
  std::vector<Rational> out;
  for (GateId o : c.outputs()) out.push_back(val[o]);
  return out;
}

Rational evaluate_form(const Circuit& c, const std::vector<Vec>& inputs) {
  if (c.outputs().empty()) throw std::invalid_argument("circuit has no outputs");
  return evaluate_circuit(c, inputs).front();
}

FoldResult fold_constants(const Circuit& c) {
  const auto& gs = c.gates();
  auto order = topological_order(c);
  // Constant value of each gate, if any.
  std::vector<std::optional<Rational>> cv(gs.size());
  std::vector<std::vector<Wire>> live(gs.size());
  for (GateId i : order) {
    const Gate& g = gs[i];
    if (g.kind == GateKind::Constant) cv[i] = g.constant;
    if (g.kind != GateKind::Add && g.kind != GateKind::Mul) continue;
    std::vector<Wire> ws;
    Rational acc = g.kind == GateKind::Add ? Rational(0) : Rational(1);
    bool all_const = true, zero = false;
    for (const auto& w : g.inputs) {
      if (w.label == 0 || (cv[w.source] && *cv[w.source] == 0)) {
        if (g.kind == GateKind::Mul) zero = true;
        continue;
      }
      if (cv[w.source]) {
        if (g.kind == GateKind::Add)
          acc += w.label * *cv[w.source];
        else
          acc *= w.label * *cv[w.source];
      } else {
        all_const = false;
      }
      ws.push_back(w);
    }
    if (zero)
      cv[i] = Rational(0);
    else if (all_const)
      cv[i] = acc;
    else
      live[i] = std::move(ws);
  }
  std::vector<bool> needed(gs.size(), false);
  std::vector<GateId> st(c.outputs().begin(), c.outputs().end());
  while (!st.empty()) {
    GateId x = st.back();
    st.pop_back();
    if (needed[x]) continue;
    needed[x] = true;
    if (!cv[x])
      for (const auto& w : live[x]) st.push_back(w.source);
  }
  Circuit out(c.mode_dims());
  std::vector<GateId> image(gs.size(), 0);
  for (GateId i : order) {
    if (!needed[i]) continue;
    const Gate& g = gs[i];
    if (cv[i] && g.kind != GateKind::Input) {
      image[i] = out.constant(*cv[i]);
      continue;
    }
    if (g.kind == GateKind::Input) {
      image[i] = out.input(g.mode, g.index);
      continue;
    }
    std::vector<Wire> ws;
    for (const auto& w : live[i]) ws.push_back({image[w.source], w.label});
    image[i] = g.kind == GateKind::Add ? out.add(std::move(ws)) : out.mul(std::move(ws));
  }
  for (GateId o : c.outputs()) out.add_output(image[o]);
  return {out, c.size(), out.size()};
}

std::vector<GateId> splice(Circuit& dst, const Circuit& src,
                           const std::function<GateId(std::size_t, std::uint64_t)>& input_map) {
  const auto& gs = src.gates();
  std::vector<GateId> order;
  if (builder_ordered(src)) {
    order.resize(gs.size());
    for (GateId i = 0; i < gs.size(); ++i) order[i] = i;
  } else {
    order = topological_order(src);
  }
  std::vector<bool> needed(gs.size(), false);
  std::vector<GateId> st(src.outputs().begin(), src.outputs().end());
  while (!st.empty()) {
    GateId x = st.back();
    st.pop_back();
    if (needed[x]) continue;
    needed[x] = true;
    for (const auto& w : gs[x].inputs) st.push_back(w.source);
  }
  std::vector<GateId> image(gs.size(), 0);
  for (GateId i : order) {
    if (!needed[i]) continue;
    const Gate& g = gs[i];
    switch (g.kind) {
      case GateKind::Input: image[i] = input_map(g.mode, g.index); break;
      case GateKind::Constant: image[i] = dst.constant(g.constant); break;
      case GateKind::Add:
      case GateKind::Mul: {
        std::vector<Wire> ws;
        for (const auto& w : g.inputs) ws.push_back({image[w.source], w.label});
        image[i] = g.kind == GateKind::Add ? dst.add(std::move(ws)) : dst.mul(std::move(ws));
      }
    }
  }
  std::vector<GateId> outs;
  for (GateId o : src.outputs()) outs.push_back(image[o]);
  return outs;
}

void write_circuit(std::ostream& out, const Circuit& c) {
  out << "c " << c.mode_dims().size();
  for (auto d : c.mode_dims()) out << " " << d;
  out << "\n";
  for (GateId i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    out << "g " << i << " " << gate_kind_name(g.kind);
    if (g.kind == GateKind::Input) out << " " << g.mode << " " << g.index;
    if (g.kind == GateKind::Constant) out << " " << to_fraction_string(g.constant);
    out << "\n";
  }
  for (GateId i = 0; i < c.gates().size(); ++i)
    for (const auto& w : c.gates()[i].inputs)
      out << "w " << w.source << " " << i << " " << to_fraction_string(w.label) << "\n";
  for (GateId o : c.outputs()) out << "o " << o << "\n";
}

Circuit read_circuit(std::istream& in) {
  std::string line;
  std::optional<Circuit> c;
  std::vector<Gate> gates;
  std::vector<std::tuple<GateId, GateId, Rational>> wires;
  std::vector<GateId> outs;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": " + what);
    };
    if (tag == "c") {
      std::size_t d = 0;
      if (!(ls >> d)) fail("bad header");
      std::vector<std::uint64_t> dims(d);
      for (auto& x : dims)
        if (!(ls >> x)) fail("bad mode dimension");
      c = Circuit(dims);
    } else if (tag == "g") {
      GateId id = 0;
      std::string kind;
      if (!(ls >> id >> kind)) fail("bad gate");
      if (id != gates.size()) fail("gate ids must be consecutive from 0");
      Gate g;
      if (kind == "input") {
        g.kind = GateKind::Input;
        if (!(ls >> g.mode >> g.index)) fail("bad input gate");
      } else if (kind == "const") {
        g.kind = GateKind::Constant;
        std::string q;
        if (!(ls >> q)) fail("bad constant");
        g.constant = parse_rational(q);
      } else if (kind == "add") {
        g.kind = GateKind::Add;
      } else if (kind == "mul") {
        g.kind = GateKind::Mul;
      } else {
        fail("unknown gate kind '" + kind + "'");
      }
      gates.push_back(std::move(g));
    } else if (tag == "w") {
      GateId s = 0, t = 0;
      std::string q;
      if (!(ls >> s >> t >> q)) fail("bad wire");
      wires.emplace_back(s, t, parse_rational(q));
    } else if (tag == "o") {
      GateId o = 0;
      if (!(ls >> o)) fail("bad output");
      outs.push_back(o);
    } else {
      fail("unknown tag '" + tag + "'");
    }
  }
  if (!c) throw std::invalid_argument("circuit: missing header");
  for (auto& [s, t, q] : wires) {
    if (t >= gates.size() || s >= gates.size()) throw std::invalid_argument("circuit: wire references unknown gate");
    gates[t].inputs.push_back({s, q});
  }
  for (auto& g : gates) {
    if (g.kind == GateKind::Input &&
        (g.mode >= c->mode_dims().size() || g.index >= c->mode_dims()[g.mode]))
      throw std::invalid_argument("circuit: input gate outside declared modes");
    c->push(std::move(g));
  }
  for (GateId o : outs) c->add_output(o);
  return *c;
}

}  // namespace gtensor
