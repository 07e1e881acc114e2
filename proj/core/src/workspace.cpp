#include "excat/workspace.hpp"

#include <fstream>
#include <sstream>

namespace excat {

const Module& Workspace::module_ref(const std::string& name) const {
  auto it = modules.find(name);
  if (it == modules.end()) throw Error("unresolved module reference: " + name);
  return it->second;
}

const ModuleMorphism& Workspace::morphism_ref(const std::string& name) const {
  auto it = morphisms.find(name);
  if (it == morphisms.end()) throw Error("unresolved morphism reference: " + name);
  return it->second;
}

const Complex& Workspace::complex_ref(const std::string& name) const {
  auto it = complexes.find(name);
  if (it == complexes.end()) throw Error("unresolved complex reference: " + name);
  return it->second;
}

namespace {

struct Lines {
  std::vector<std::string> raw;
  std::size_t pos = 0;

  bool done() const { return pos >= raw.size(); }
  // next meaningful line (skips blanks and comments); empty when exhausted
  std::vector<std::string> next(std::size_t& lineno) {
    while (pos < raw.size()) {
      std::string s = raw[pos];
      auto hash = s.find('#');
      if (hash != std::string::npos) s = s.substr(0, hash);
      std::istringstream in(s);
      std::vector<std::string> toks;
      std::string t;
      while (in >> t) toks.push_back(t);
      ++pos;
      if (!toks.empty()) {
        lineno = pos;  // 1-based
        return toks;
      }
    }
    lineno = raw.size();
    return {};
  }
  void putback() {
    if (pos > 0) --pos;
  }
};

std::uint32_t parse_entry(const std::string& tok, std::size_t line) {
  try {
    long long v = std::stoll(tok);
    if (v < 0) throw std::out_of_range("negative");
    return std::uint32_t(v);
  } catch (...) {
    throw Error("line " + std::to_string(line) + ": expected a number, got '" + tok + "'");
  }
}

int parse_int(const std::string& tok, std::size_t line) {
  try {
    return std::stoi(tok);
  } catch (...) {
    throw Error("line " + std::to_string(line) + ": expected an integer, got '" + tok + "'");
  }
}

// reads `rows` lines of `cols` entries each; zero-size matrices read nothing
Matrix read_matrix(Lines& in, std::uint32_t p, std::size_t rows, std::size_t cols) {
  Matrix m(p, rows, cols);
  if (rows == 0 || cols == 0) return m;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t line = 0;
    auto toks = in.next(line);
    if (toks.size() != cols)
      throw Error("line " + std::to_string(line) + ": expected " + std::to_string(cols) +
                  " entries, got " + std::to_string(toks.size()));
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = parse_entry(toks[c], line) % p;
  }
  return m;
}

void expect_size(const std::vector<std::string>& toks, std::size_t n, std::size_t line,
                 const std::string& what) {
  if (toks.size() != n)
    throw Error("line " + std::to_string(line) + ": malformed " + what);
}

}  // namespace

Workspace parse_workspace(const std::string& text) {
  Workspace ws;
  Lines in;
  {
    std::istringstream stream(text);
    std::string l;
    while (std::getline(stream, l)) in.raw.push_back(l);
  }
  std::vector<std::string> errors;

  auto is_toplevel = [](const std::string& kw) {
    return kw == "field" || kw == "algebra" || kw == "module" || kw == "morphism" ||
           kw == "complex" || kw == "set" || kw == "universe" || kw == "cuniverse" ||
           kw == "filtration";
  };
  // advance to the end of the current block; tolerant of an already-consumed
  // `end` (stops in front of the next top-level keyword)
  auto skip_block = [&]() {
    std::size_t line = 0;
    for (;;) {
      auto toks = in.next(line);
      if (toks.empty() || toks[0] == "end") return;
      if (is_toplevel(toks[0])) {
        in.putback();
        return;
      }
    }
  };

  for (;;) {
    std::size_t line = 0;
    auto toks = in.next(line);
    if (toks.empty()) break;
    const std::string& kw = toks[0];
    try {
      if (kw == "field") {
        expect_size(toks, 2, line, "field declaration");
        ws.field_p = FieldPrime(parse_entry(toks[1], line)).p;
      } else if (kw == "algebra") {
        // algebra NAME DIM ... unit/mul lines ... end
        if (ws.field_p == 0) throw Error("line " + std::to_string(line) +
                                         ": algebra declared before field");
        expect_size(toks, 3, line, "algebra header");
        std::string name = toks[1];
        std::size_t d = parse_entry(toks[2], line);
        std::vector<std::uint32_t> sc(d * d * d, 0);
        std::vector<std::uint32_t> unit(d, 0);
        for (;;) {
          std::size_t l2 = 0;
          auto t2 = in.next(l2);
          if (t2.empty()) throw Error("line " + std::to_string(l2) + ": unterminated algebra");
          if (t2[0] == "end") break;
          if (t2[0] == "unit") {
            expect_size(t2, 1 + d, l2, "unit line");
            for (std::size_t i = 0; i < d; ++i) unit[i] = parse_entry(t2[1 + i], l2);
          } else if (t2[0] == "mul") {
            // mul i j = c_0 ... c_{d-1}
            expect_size(t2, 4 + d, l2, "mul line");
            std::size_t i = parse_entry(t2[1], l2), j = parse_entry(t2[2], l2);
            if (t2[3] != "=" || i >= d || j >= d)
              throw Error("line " + std::to_string(l2) + ": malformed mul line");
            for (std::size_t k = 0; k < d; ++k)
              sc[(i * d + j) * d + k] = parse_entry(t2[4 + k], l2);
          } else {
            throw Error("line " + std::to_string(l2) + ": unknown algebra item '" + t2[0] + "'");
          }
        }
        ws.algebras[name] =
            std::make_shared<const Algebra>(FieldPrime(ws.field_p), d, sc, unit);
      } else if (kw == "module") {
        // module NAME ALGEBRA DIM ... action lines ... end
        expect_size(toks, 4, line, "module header");
        std::string name = toks[1];
        auto ai = ws.algebras.find(toks[2]);
        if (ai == ws.algebras.end())
          throw Error("line " + std::to_string(line) + ": unknown algebra '" + toks[2] + "'");
        AlgebraPtr alg = ai->second;
        std::size_t n = parse_entry(toks[3], line);
        std::vector<Matrix> action(alg->dim, Matrix(alg->field.p, n, n));
        std::vector<bool> seen(alg->dim, n == 0);
        for (;;) {
          std::size_t l2 = 0;
          auto t2 = in.next(l2);
          if (t2.empty()) throw Error("line " + std::to_string(l2) + ": unterminated module");
          if (t2[0] == "end") break;
          if (t2[0] != "action" || t2.size() != 2)
            throw Error("line " + std::to_string(l2) + ": expected 'action INDEX'");
          std::size_t i = parse_entry(t2[1], l2);
          if (i >= alg->dim)
            throw Error("line " + std::to_string(l2) + ": action index out of range");
          action[i] = read_matrix(in, alg->field.p, n, n);
          seen[i] = true;
        }
        for (std::size_t i = 0; i < alg->dim; ++i)
          if (!seen[i])
            throw Error("module " + name + ": missing action for basis element " +
                        std::to_string(i));
        ws.modules.emplace(name, Module(alg, n, std::move(action)));
      } else if (kw == "morphism") {
        // morphism NAME SOURCE TARGET ... rows | zero | identity ... end
        expect_size(toks, 4, line, "morphism header");
        std::string name = toks[1];
        const Module& src = ws.module_ref(toks[2]);
        const Module& tgt = ws.module_ref(toks[3]);
        const std::uint32_t p = src.alg->field.p;
        Matrix m(p, tgt.dim, src.dim);
        bool filled = src.dim == 0 || tgt.dim == 0;
        for (;;) {
          std::size_t l2 = 0;
          auto t2 = in.next(l2);
          if (t2.empty()) throw Error("line " + std::to_string(l2) + ": unterminated morphism");
          if (t2[0] == "end") break;
          if (t2[0] == "zero") {
            filled = true;
          } else if (t2[0] == "identity") {
            if (src.dim != tgt.dim)
              throw Error("line " + std::to_string(l2) + ": identity needs equal dims");
            m = Matrix::identity(p, src.dim);
            filled = true;
          } else if (t2[0] == "matrix") {
            m = read_matrix(in, p, tgt.dim, src.dim);
            filled = true;
          } else {
            throw Error("line " + std::to_string(l2) + ": unknown morphism item '" + t2[0] + "'");
          }
        }
        if (!filled) throw Error("morphism " + name + ": no matrix given");
        ws.morphisms.emplace(name, ModuleMorphism(src, tgt, std::move(m)));
      } else if (kw == "complex") {
        // complex NAME ALGEBRA LO HI ... component/diff ... end
        expect_size(toks, 5, line, "complex header");
        std::string name = toks[1];
        auto ai = ws.algebras.find(toks[2]);
        if (ai == ws.algebras.end())
          throw Error("line " + std::to_string(line) + ": unknown algebra '" + toks[2] + "'");
        AlgebraPtr alg = ai->second;
        int lo = parse_int(toks[3], line), hi = parse_int(toks[4], line);
        if (lo > hi) throw Error("line " + std::to_string(line) + ": empty window");
        std::size_t len = std::size_t(hi - lo + 1);
        std::vector<Module> comp(len, zero_module(alg));
        std::vector<std::optional<Matrix>> dmat(len - 1);
        for (;;) {
          std::size_t l2 = 0;
          auto t2 = in.next(l2);
          if (t2.empty()) throw Error("line " + std::to_string(l2) + ": unterminated complex");
          if (t2[0] == "end") break;
          if (t2[0] == "component") {
            // component DEGREE = MODULE
            expect_size(t2, 4, l2, "component line");
            int n = parse_int(t2[1], l2);
            if (t2[2] != "=" || n < lo || n > hi)
              throw Error("line " + std::to_string(l2) + ": bad component line");
            comp[std::size_t(n - lo)] = ws.module_ref(t2[3]);
          } else if (t2[0] == "diff") {
            expect_size(t2, 2, l2, "diff line");
            int n = parse_int(t2[1], l2);
            if (n < lo || n >= hi)
              throw Error("line " + std::to_string(l2) + ": diff degree outside window");
            dmat[std::size_t(n - lo)] = read_matrix(
                in, alg->field.p, comp[std::size_t(n + 1 - lo)].dim,
                comp[std::size_t(n - lo)].dim);
          } else {
            throw Error("line " + std::to_string(l2) + ": unknown complex item '" + t2[0] + "'");
          }
        }
        std::vector<ModuleMorphism> diff;
        for (std::size_t n = 0; n + 1 < len; ++n) {
          Matrix m = dmat[n] ? *dmat[n]
                             : Matrix(alg->field.p, comp[n + 1].dim, comp[n].dim);
          diff.emplace_back(comp[n], comp[n + 1], std::move(m));
        }
        ws.complexes.emplace(name, make_complex(alg, lo, hi, std::move(comp), std::move(diff)));
      } else if (kw == "set" || kw == "universe" || kw == "cuniverse" || kw == "filtration") {
        // KW NAME = member...
        if (toks.size() < 3 || toks[2] != "=")
          throw Error("line " + std::to_string(line) + ": malformed " + kw + " line");
        std::vector<std::string> names(toks.begin() + 3, toks.end());
        if (kw == "set") {
          for (const auto& n : names) ws.morphism_ref(n);
          ws.sets[toks[1]] = names;
        } else if (kw == "universe") {
          for (const auto& n : names) ws.module_ref(n);
          ws.universes[toks[1]] = names;
        } else if (kw == "cuniverse") {
          for (const auto& n : names) ws.complex_ref(n);
          ws.cuniverses[toks[1]] = names;
        } else {
          for (const auto& n : names) ws.morphism_ref(n);
          ws.filtrations[toks[1]] = names;
        }
      } else {
        throw Error("line " + std::to_string(line) + ": unknown keyword '" + kw + "'");
      }
    } catch (const Error& e) {
      errors.push_back(e.what());
      if (kw == "algebra" || kw == "module" || kw == "morphism" || kw == "complex")
        skip_block();
    }
  }
  if (!errors.empty()) throw LoadError(std::move(errors));
  return ws;
}

Workspace load_workspace(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw LoadError({"cannot open workspace file: " + path});
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_workspace(buf.str());
}

}  // namespace excat
