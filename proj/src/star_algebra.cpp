#include "wmk/star_algebra.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace wmk {

namespace {

const Edge& find_edge(const WeightedGraph& g, const std::string& id) {
  for (const Edge& e : g.edges())
    if (e.id == id) return e;
  throw ValidationError("unknown edge id \"" + id + "\"");
}

}  // namespace

std::string Letter::str() const {
  switch (kind) {
    case Kind::Vertex:
      return name;
    case Kind::Edge:
      return name + "_" + std::to_string(index);
    case Kind::Ghost:
      return name + "_" + std::to_string(index) + "*";
  }
  return name;
}

std::string StarMonomial::str() const {
  std::string out;
  for (const Letter& l : word) {
    if (!out.empty()) out += " ";
    out += l.str();
  }
  return out;
}

std::string letter_source(const WeightedGraph& g, const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::Vertex:
      return l.name;
    case Letter::Kind::Edge:
      return find_edge(g, l.name).source;
    case Letter::Kind::Ghost:
      return find_edge(g, l.name).range;
  }
  return l.name;
}

std::string letter_range(const WeightedGraph& g, const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::Vertex:
      return l.name;
    case Letter::Kind::Edge:
      return find_edge(g, l.name).range;
    case Letter::Kind::Ghost:
      return find_edge(g, l.name).source;
  }
  return l.name;
}

std::optional<StarMonomial> normalize_word(const WeightedGraph& g,
                                           std::vector<Letter> word) {
  if (word.empty())
    throw ValidationError("cannot normalize an empty word");
  for (const Letter& l : word) {
    if (l.kind == Letter::Kind::Vertex) {
      if (!g.has_vertex(l.name))
        throw UnknownVertex(l.name);
    } else {
      const Edge& e = find_edge(g, l.name);
      if (l.index < 1)
        throw IndexOutOfRange("component index " + std::to_string(l.index) +
                              " of edge \"" + l.name + "\" must be >= 1");
      if (l.index > e.weight) return std::nullopt;  // zero-padded component
    }
  }
  std::vector<Letter> out;
  out.reserve(word.size());
  for (Letter& l : word) {
    if (out.empty()) {
      out.push_back(std::move(l));
      continue;
    }
    const bool prev_v = out.back().kind == Letter::Kind::Vertex;
    const bool cur_v = l.kind == Letter::Kind::Vertex;
    if (prev_v && cur_v) {
      if (out.back().name != l.name) return std::nullopt;
      continue;  // idempotent merge
    }
    if (prev_v) {
      if (out.back().name != letter_source(g, l)) return std::nullopt;
      out.back() = std::move(l);  // vertex absorbed on the left
      continue;
    }
    if (cur_v) {
      if (letter_range(g, out.back()) != l.name) return std::nullopt;
      continue;  // vertex absorbed on the right
    }
    if (letter_range(g, out.back()) != letter_source(g, l))
      return std::nullopt;  // incompatible interfaces annihilate
    out.push_back(std::move(l));
  }
  return StarMonomial{std::move(out)};
}

StarPolynomial StarPolynomial::vertex(const WeightedGraph& g,
                                      const std::string& v) {
  StarPolynomial p;
  auto m = normalize_word(g, {Letter::vertex(v)});
  p.add_term(std::move(*m), 1);
  return p;
}

StarPolynomial StarPolynomial::edge_letter(const WeightedGraph& g,
                                           const std::string& e, int i) {
  StarPolynomial p;
  auto m = normalize_word(g, {Letter::edge(e, i)});
  if (m) p.add_term(std::move(*m), 1);
  return p;
}

StarPolynomial StarPolynomial::ghost_letter(const WeightedGraph& g,
                                            const std::string& e, int i) {
  StarPolynomial p;
  auto m = normalize_word(g, {Letter::ghost(e, i)});
  if (m) p.add_term(std::move(*m), 1);
  return p;
}

void StarPolynomial::add_term(StarMonomial m, Rat c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

StarPolynomial StarPolynomial::operator+(const StarPolynomial& o) const {
  StarPolynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

StarPolynomial StarPolynomial::operator-(const StarPolynomial& o) const {
  StarPolynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

StarPolynomial StarPolynomial::operator-() const {
  StarPolynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

StarPolynomial StarPolynomial::scaled(const Rat& c) const {
  StarPolynomial out;
  if (c == 0) return out;
  for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
  return out;
}

StarPolynomial StarPolynomial::multiply(const WeightedGraph& g,
                                        const StarPolynomial& o) const {
  StarPolynomial out;
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      std::vector<Letter> w = m1.word;
      w.insert(w.end(), m2.word.begin(), m2.word.end());
      auto n = normalize_word(g, std::move(w));
      if (n) out.add_term(std::move(*n), c1 * c2);
    }
  }
  return out;
}

StarPolynomial StarPolynomial::star() const {
  StarPolynomial out;
  for (const auto& [m, c] : terms_) {
    StarMonomial s;
    s.word.reserve(m.word.size());
    for (auto it = m.word.rbegin(); it != m.word.rend(); ++it) {
      Letter l = *it;
      if (l.kind == Letter::Kind::Edge)
        l.kind = Letter::Kind::Ghost;
      else if (l.kind == Letter::Kind::Ghost)
        l.kind = Letter::Kind::Edge;
      s.word.push_back(std::move(l));
    }
    out.terms_.emplace(std::move(s), c);
  }
  return out;
}

std::string StarPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    Rat a = c;
    if (out.empty()) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    if (a != 1) out += a.str() + " ";
    out += m.str();
  }
  return out;
}

// --- complete-sum rewriting ---------------------------------------------------

namespace {

struct Contraction {
  std::vector<StarMonomial> members;        // removed, each with coeff c
  std::optional<StarMonomial> replacement;  // added with coeff c, if any
  Rat coeff;
};

// A group anchored at the adjacent pair (p, p+1) of m: all words obtained by
// letting one defining sum range over its index, identical elsewhere.  The
// contraction fires only when every non-zero-padded member is present in
// `poly` with exactly the anchor's coefficient.
std::optional<Contraction> group_at(const WeightedGraph& g,
                                    const StarPolynomial& poly,
                                    const StarMonomial& m, const Rat& c,
                                    std::size_t p, const ReductionRules& rules) {
  const Letter& x = m.word[p];
  const Letter& y = m.word[p + 1];

  // Sum over the edges at a vertex: members g_i g_j* for g in s^-1(v),
  // value delta_{ij} v.
  if (rules.use_edge_ghost_sums && x.kind == Letter::Kind::Edge &&
      y.kind == Letter::Kind::Ghost && x.name == y.name) {
    const Edge& e0 = find_edge(g, x.name);
    const int i = x.index, j = y.index;
    Contraction con;
    con.coeff = c;
    bool complete = true;
    for (const Edge& e : g.out_edges(e0.source)) {
      if (i > e.weight || j > e.weight) continue;  // present as zero
      StarMonomial mg = m;
      mg.word[p] = Letter::edge(e.id, i);
      mg.word[p + 1] = Letter::ghost(e.id, j);
      auto it = poly.terms().find(mg);
      if (it == poly.terms().end() || it->second != c) {
        complete = false;
        break;
      }
      con.members.push_back(std::move(mg));
    }
    if (complete) {
      if (i == j) {
        std::vector<Letter> w;
        w.reserve(m.word.size() - 1);
        for (std::size_t q = 0; q < m.word.size(); ++q) {
          if (q == p) {
            w.push_back(Letter::vertex(e0.source));
            continue;
          }
          if (q == p + 1) continue;
          w.push_back(m.word[q]);
        }
        con.replacement = normalize_word(g, std::move(w));
      }
      return con;
    }
  }

  // Sum over the component index: members e_h* f_h for h up to the vertex
  // weight, value delta_{ef} r(e).
  if (rules.use_ghost_edge_sums && x.kind == Letter::Kind::Ghost &&
      y.kind == Letter::Kind::Edge && x.index == y.index) {
    const Edge& e0 = find_edge(g, x.name);
    const Edge& f0 = find_edge(g, y.name);
    if (e0.source != f0.source) return std::nullopt;
    const int hmax = std::min(e0.weight, f0.weight);
    Contraction con;
    con.coeff = c;
    for (int h = 1; h <= hmax; ++h) {
      StarMonomial mh = m;
      mh.word[p].index = h;
      mh.word[p + 1].index = h;
      auto it = poly.terms().find(mh);
      if (it == poly.terms().end() || it->second != c) return std::nullopt;
      con.members.push_back(std::move(mh));
    }
    if (e0.id == f0.id) {
      std::vector<Letter> w;
      w.reserve(m.word.size() - 1);
      for (std::size_t q = 0; q < m.word.size(); ++q) {
        if (q == p) {
          w.push_back(Letter::vertex(e0.range));
          continue;
        }
        if (q == p + 1) continue;
        w.push_back(m.word[q]);
      }
      con.replacement = normalize_word(g, std::move(w));
    }
    return con;
  }
  return std::nullopt;
}

std::optional<Contraction> find_contraction(const WeightedGraph& g,
                                            const StarPolynomial& poly,
                                            const ReductionRules& rules) {
  auto scan_word = [&](const StarMonomial& m,
                       const Rat& c) -> std::optional<Contraction> {
    if (m.word.size() < 2) return std::nullopt;
    if (!rules.scan_reverse) {
      for (std::size_t p = 0; p + 1 < m.word.size(); ++p)
        if (auto con = group_at(g, poly, m, c, p, rules)) return con;
    } else {
      for (std::size_t p = m.word.size() - 1; p-- > 0;)
        if (auto con = group_at(g, poly, m, c, p, rules)) return con;
    }
    return std::nullopt;
  };
  if (!rules.scan_reverse) {
    for (const auto& [m, c] : poly.terms())
      if (auto con = scan_word(m, c)) return con;
  } else {
    for (auto it = poly.terms().rbegin(); it != poly.terms().rend(); ++it)
      if (auto con = scan_word(it->first, it->second)) return con;
  }
  return std::nullopt;
}

}  // namespace

StarPolynomial reduce(const WeightedGraph& g, StarPolynomial p,
                      const ReductionRules& rules) {
  for (std::size_t pass = 0;; ++pass) {
    if (pass >= rules.pass_cap)
      throw NonTermination("contraction pass cap exceeded");
    auto con = find_contraction(g, p, rules);
    if (!con) return p;
    for (StarMonomial& m : con->members) p.add_term(std::move(m), -con->coeff);
    if (con->replacement)
      p.add_term(std::move(*con->replacement), con->coeff);
  }
}

// --- matrices -----------------------------------------------------------------

BlockMatrix::BlockMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

StarPolynomial& BlockMatrix::at(std::size_t r, std::size_t c) {
  if (r >= rows_ || c >= cols_)
    throw IndexOutOfRange("matrix entry (" + std::to_string(r) + ", " +
                          std::to_string(c) + ") out of range");
  return entries_[r * cols_ + c];
}

const StarPolynomial& BlockMatrix::at(std::size_t r, std::size_t c) const {
  return const_cast<BlockMatrix*>(this)->at(r, c);
}

BlockMatrix BlockMatrix::multiply(const WeightedGraph& g,
                                  const BlockMatrix& o) const {
  if (cols_ != o.rows_)
    throw DimensionMismatch("matrix product " + std::to_string(rows_) + "x" +
                            std::to_string(cols_) + " * " +
                            std::to_string(o.rows_) + "x" +
                            std::to_string(o.cols_));
  BlockMatrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < o.cols_; ++c) {
      StarPolynomial acc;
      for (std::size_t t = 0; t < cols_; ++t)
        acc = acc + at(r, t).multiply(g, o.at(t, c));
      out.at(r, c) = std::move(acc);
    }
  return out;
}

BlockMatrix BlockMatrix::operator-(const BlockMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw DimensionMismatch("matrix difference of unequal shapes");
  BlockMatrix out(rows_, cols_);
  for (std::size_t t = 0; t < entries_.size(); ++t)
    out.entries_[t] = entries_[t] - o.entries_[t];
  return out;
}

BlockMatrix BlockMatrix::star() const {
  BlockMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c).star();
  return out;
}

BlockMatrix BlockMatrix::hconcat(const BlockMatrix& o) const {
  if (rows_ != o.rows_)
    throw DimensionMismatch("horizontal concatenation of unequal row counts");
  BlockMatrix out(rows_, cols_ + o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
    for (std::size_t c = 0; c < o.cols_; ++c) out.at(r, cols_ + c) = o.at(r, c);
  }
  return out;
}

BlockMatrix BlockMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0,
                               std::size_t c1) const {
  if (r0 > r1 || r1 > rows_ || c0 > c1 || c1 > cols_)
    throw IndexOutOfRange("matrix block out of range");
  BlockMatrix out(r1 - r0, c1 - c0);
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t c = c0; c < c1; ++c) out.at(r - r0, c - c0) = at(r, c);
  return out;
}

BlockMatrix BlockMatrix::diag(std::vector<StarPolynomial> entries) {
  BlockMatrix out(entries.size(), entries.size());
  for (std::size_t t = 0; t < entries.size(); ++t)
    out.at(t, t) = std::move(entries[t]);
  return out;
}

BlockMatrix build_A(const WeightedGraph& g, const std::string& v) {
  const VertexStrata s = g.strata(v);  // throws UnknownVertex
  if (s.out_degree() == 0)
    throw EmptySource(v);
  const std::size_t w = static_cast<std::size_t>(s.vertex_weight());
  BlockMatrix A(w, s.out_degree());
  for (std::size_t p = 0; p < s.edges.size(); ++p)
    for (int h = 1; h <= s.edges[p].weight; ++h)
      A.at(static_cast<std::size_t>(h - 1), p) =
          StarPolynomial::edge_letter(g, s.edges[p].id, h);
  return A;
}

IdentityCheck verify_identity(const WeightedGraph& g, std::string name,
                              std::string vertex, const BlockMatrix& lhs,
                              const BlockMatrix& rhs,
                              const ReductionRules& rules) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw DimensionMismatch("identity \"" + name +
                            "\" compares matrices of unequal shapes");
  IdentityCheck check;
  check.name = std::move(name);
  check.vertex = std::move(vertex);
  check.verified = true;
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t c = 0; c < lhs.cols(); ++c) {
      StarPolynomial residual = reduce(g, lhs.at(r, c) - rhs.at(r, c), rules);
      if (!residual.is_zero()) {
        check.verified = false;
        check.row = r;
        check.col = c;
        check.residual = residual.str();
        return check;
      }
    }
  return check;
}

bool WitnessReport::all_verified() const {
  for (const IdentityCheck& c : checks)
    if (!c.verified) return false;
  return true;
}

WitnessReport verify_theorem_witnesses(const WeightedGraph& g,
                                       const std::optional<std::string>& vertex,
                                       const ReductionRules& rules) {
  std::vector<std::string> targets;
  if (vertex) {
    g.vertex_index(*vertex);  // throws UnknownVertex
    targets.push_back(*vertex);
  } else {
    for (const std::string& v : g.vertices())
      if (!g.out_edges(v).empty()) targets.push_back(v);
  }

  WitnessReport rep;
  for (const std::string& v : targets) {
    const VertexStrata s = g.strata(v);
    const BlockMatrix A = build_A(g, v);  // throws EmptySource for sinks
    const std::size_t n = s.out_degree();
    const std::size_t k = s.k;
    const StarPolynomial vp = StarPolynomial::vertex(g, v);

    auto vdiag = [&](std::size_t m) {
      return BlockMatrix::diag(std::vector<StarPolynomial>(m, vp));
    };
    auto range_diag = [&](std::size_t p0, std::size_t p1) {
      std::vector<StarPolynomial> d;
      for (std::size_t p = p0; p < p1; ++p)
        d.push_back(StarPolynomial::vertex(g, s.edges[p].range));
      return BlockMatrix::diag(std::move(d));
    };
    // The complement projection of stratum l, in its rewritable form
    // v I - B_l B_l*.
    auto eps = [&](std::size_t l) {
      const std::size_t wl = static_cast<std::size_t>(s.weights[l]);
      const std::size_t nl = s.counts[l];
      const BlockMatrix B = A.block(0, wl, 0, nl);
      return vdiag(wl) - B.multiply(g, B.star());
    };
    auto named = [&](const char* base, std::size_t l) {
      return std::string(base) + "[" + std::to_string(l) + "]";
    };

    rep.checks.push_back(verify_identity(
        g, "a_astar_diag", v, A.multiply(g, A.star()),
        vdiag(static_cast<std::size_t>(s.vertex_weight())), rules));
    rep.checks.push_back(verify_identity(g, "astar_a_diag", v,
                                         A.star().multiply(g, A),
                                         range_diag(0, n), rules));

    for (std::size_t l = 1; l + 1 <= k; ++l) {
      const std::size_t wl = static_cast<std::size_t>(s.weights[l]);
      const std::size_t nl = s.counts[l];
      const std::size_t nprev = s.counts[l - 1];
      const BlockMatrix B = A.block(0, wl, 0, nl);
      const BlockMatrix C = A.block(0, wl, nl, n);
      const BlockMatrix D = A.block(0, wl, nprev, nl);
      const BlockMatrix CC = C.multiply(g, C.star());
      const BlockMatrix E = eps(l);

      rep.checks.push_back(
          verify_identity(g, named("complement_identity", l), v, CC, E, rules));
      rep.checks.push_back(verify_identity(g, named("truncation_isometry", l),
                                           v, B.star().multiply(g, B),
                                           range_diag(0, nl), rules));
      rep.checks.push_back(verify_identity(g, named("projection_idempotent", l),
                                           v, E.multiply(g, E), E, rules));
      rep.checks.push_back(verify_identity(
          g, named("projection_annihilates_stratum", l), v, CC.multiply(g, D),
          BlockMatrix(wl, nl - nprev), rules));
    }

    for (std::size_t l = 1; l <= k; ++l) {
      const std::size_t wl = static_cast<std::size_t>(s.weights[l]);
      const std::size_t wprev = static_cast<std::size_t>(s.weights[l - 1]);
      const std::size_t nl = s.counts[l];
      const std::size_t nprev = s.counts[l - 1];
      const BlockMatrix D = A.block(0, wl, nprev, nl);
      const BlockMatrix X = l < k ? eps(l).hconcat(D) : D;

      BlockMatrix left_expect(wl, wl);
      if (l >= 2) {
        const BlockMatrix Eprev = eps(l - 1);
        for (std::size_t r = 0; r < wprev; ++r)
          for (std::size_t c = 0; c < wprev; ++c)
            left_expect.at(r, c) = Eprev.at(r, c);
      }
      for (std::size_t t = wprev; t < wl; ++t) left_expect.at(t, t) = vp;
      rep.checks.push_back(verify_identity(g, named("corner_factor_left", l), v,
                                           X.multiply(g, X.star()), left_expect,
                                           rules));

      const std::size_t head = l < k ? wl : 0;
      BlockMatrix right_expect(head + nl - nprev, head + nl - nprev);
      if (l < k) {
        const BlockMatrix El = eps(l);
        for (std::size_t r = 0; r < wl; ++r)
          for (std::size_t c = 0; c < wl; ++c)
            right_expect.at(r, c) = El.at(r, c);
      }
      for (std::size_t t = 0; t < nl - nprev; ++t)
        right_expect.at(head + t, head + t) =
            StarPolynomial::vertex(g, s.edges[nprev + t].range);
      rep.checks.push_back(verify_identity(g, named("corner_factor_right", l),
                                           v, X.star().multiply(g, X),
                                           right_expect, rules));
    }
  }
  return rep;
}

}  // namespace wmk
