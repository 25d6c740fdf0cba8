#include "rqcsim/circuit_io.h"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "rqcsim/errors.h"

namespace rqcsim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_num(std::string_view s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Circuit parse_circuit(std::string_view text, const std::optional<Lattice>& lattice_hint) {
  std::map<std::string, std::string> header;
  std::optional<std::size_t> qubits;
  std::size_t qubits_line = 0;
  struct Pending {
    Gate gate;
    std::size_t line;
  };
  std::vector<Pending> pending;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;

    if (auto h = line.find('#'); h != std::string_view::npos) {
      std::string_view comment = trim(line.substr(h + 1));
      if (auto c = comment.find(':'); c != std::string_view::npos)
        header.emplace(std::string(trim(comment.substr(0, c))), std::string(trim(comment.substr(c + 1))));
      line = line.substr(0, h);
    }
    auto fields = split(line);
    if (fields.empty()) continue;

    if (!qubits) {
      std::size_t n = 0;
      if (fields.size() != 1 || !parse_num(fields[0], n)) throw ParseError(lineno, "expected the qubit count");
      qubits = n;
      qubits_line = lineno;
      continue;
    }
    if (fields.size() < 3 || fields.size() > 4) throw ParseError(lineno, "expected <cycle> <gate> <q0> [<q1>]");
    Gate g;
    if (!parse_num(fields[0], g.cycle) || g.cycle < 0) throw ParseError(lineno, "bad cycle");
    auto kind = gate_kind_from_name(fields[1]);
    if (!kind || *kind == GateKind::delta_0 || *kind == GateKind::delta_1)
      throw ParseError(lineno, "unknown gate '" + std::string(fields[1]) + "'");
    g.kind = *kind;
    if (static_cast<int>(fields.size()) - 2 != gate_arity(g.kind))
      throw ParseError(lineno, "gate '" + std::string(fields[1]) + "' takes " + std::to_string(gate_arity(g.kind)) +
                                   " qubit(s)");
    if (!parse_num(fields[2], g.q0) || g.q0 < 0) throw ParseError(lineno, "bad qubit id");
    if (fields.size() == 4 && (!parse_num(fields[3], g.q1) || g.q1 < 0)) throw ParseError(lineno, "bad qubit id");
    pending.push_back({g, lineno});
  }
  if (!qubits) throw ParseError(lineno, "missing qubit count");

  Lattice lattice;
  if (auto it = header.find("lattice"); it != header.end()) {
    try {
      lattice = Lattice::by_name(it->second);
    } catch (const std::exception& e) {
      throw ParseError(0, e.what());
    }
  } else if (lattice_hint) {
    lattice = *lattice_hint;
  } else {
    throw std::invalid_argument("circuit has no '# lattice:' header and no lattice was given");
  }
  if (*qubits != lattice.size())
    throw ParseError(qubits_line, "qubit count " + std::to_string(*qubits) + " does not match lattice " +
                                      lattice.name() + " (" + std::to_string(lattice.size()) + " sites)");

  std::set<std::pair<int, int>> used;
  int max_cycle = 0;
  for (const auto& [g, line] : pending) {
    for (int q : {g.q0, g.q1}) {
      if (q < 0) continue;
      if (!lattice.contains(q)) throw ParseError(line, "qubit " + std::to_string(q) + " is not a lattice site");
      if (!used.insert({g.cycle, q}).second)
        throw ParseError(line, "qubit " + std::to_string(q) + " appears twice in cycle " + std::to_string(g.cycle));
    }
    if (g.two_qubit() && !lattice.adjacent(g.q0, g.q1))
      throw ParseError(line, "qubits " + std::to_string(g.q0) + " and " + std::to_string(g.q1) + " are not adjacent");
    max_cycle = std::max(max_cycle, g.cycle);
  }

  DepthSpec depth;
  if (auto it = header.find("depth"); it != header.end()) {
    try {
      depth = DepthSpec::parse(it->second);
    } catch (const std::exception& e) {
      throw ParseError(0, e.what());
    }
    if (max_cycle > depth.last_cycle()) throw ParseError(0, "gate cycle exceeds header depth " + depth.str());
  } else {
    depth.t = std::max(0, max_cycle - 1);
  }

  std::vector<Gate> gates;
  gates.reserve(pending.size());
  for (const auto& p : pending) gates.push_back(p.gate);
  Circuit c(std::move(lattice), depth, std::move(gates));
  if (auto it = header.find("seed"); it != header.end()) {
    std::uint64_t s = 0;
    if (parse_num(std::string_view(it->second), s)) c.seed = s;
  }
  if (auto it = header.find("rng"); it != header.end()) c.rng_name = it->second;
  return c;
}

std::string write_circuit(const Circuit& circuit) {
  std::ostringstream out;
  out << "# lattice: " << circuit.lattice().name() << "\n";
  out << "# depth: " << circuit.depth().str() << "\n";
  if (circuit.seed) out << "# seed: " << *circuit.seed << "\n";
  if (!circuit.rng_name.empty()) out << "# rng: " << circuit.rng_name << "\n";
  out << circuit.num_qubits() << "\n";
  for (const Gate& g : circuit.gates()) {
    out << g.cycle << ' ' << gate_name(g.kind) << ' ' << g.q0;
    if (g.two_qubit()) out << ' ' << g.q1;
    out << "\n";
  }
  return out.str();
}

Circuit load_circuit(const std::string& path, const std::optional<Lattice>& lattice_hint) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open circuit file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_circuit(ss.str(), lattice_hint);
}

void save_circuit(const Circuit& circuit, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write circuit file: " + path);
  f << write_circuit(circuit);
}

}  // namespace rqcsim
