#pragma once

// JSON serialization for complexes, weights, divisors, morphisms and
// extended cycles.  The canonical form has sorted keys, two-space indent and
// every coordinate encoded as an exact string ("p" or "p/q", q > 1); for
// canonical text, write(parse(text)) == text byte for byte.
//
// Weight, divisor and morphism files name their complex either by a path
// (resolved relative to the referring file) or by an inline complex object.
// Writers emit the reference they are handed: the path when one is supplied,
// the inline object otherwise.  Loading goes through an IoContext so that
// objects referring to the same complex share one instance and compare by
// pointer.

#include <map>
#include <string>

#include "conecalc/cycles.hpp"

namespace conecalc {

std::string rat_string(const Rat& q);
Rat parse_rat(const std::string& s);  // throws ParseError

// Complexes.  parse_complex face-closes: cones may list only their maximal
// members; faces get the induced lattices.  Geometry is NOT validated here —
// loaders (and the validate command) do that.
std::string write_complex(const ConeComplex& S);
ConeComplex parse_complex(const std::string& text);

// Shared store of loaded complexes.  Path references are keyed by their
// normalized absolute path; inline complexes by their canonical text, so two
// files inlining the same complex still share an instance.
struct IoContext {
    std::map<std::string, ComplexPtr> pool;
    // Parse + validate + cache.  Throws ParseError on I/O or syntax errors.
    ComplexPtr load_complex(const std::string& path);
    // Resolve an already-parsed inline complex through the pool.
    ComplexPtr intern(ConeComplex S);
};

// `dir` resolves relative path references inside the text.
MinkowskiWeight parse_weight(const std::string& text, const std::string& dir, IoContext& ctx);
Divisor parse_divisor(const std::string& text, const std::string& dir, IoContext& ctx);
ComplexMorphism parse_morphism(const std::string& text, const std::string& dir, IoContext& ctx);
ExtendedCycle parse_extended(const std::string& text, const std::string& dir, IoContext& ctx);

// complex_ref == "" inlines the complex; otherwise it is written verbatim.
std::string write_weight(const MinkowskiWeight& w, const std::string& complex_ref = "");
std::string write_divisor(const Divisor& psi, const std::string& complex_ref = "");
std::string write_morphism(const ComplexMorphism& f, const std::string& source_ref = "",
                           const std::string& target_ref = "");
// Components are written with their star complexes inline.
std::string write_extended(const ExtendedCycle& E);

std::string read_text_file(const std::string& path);  // throws ParseError
std::string dir_of(const std::string& path);

}  // namespace conecalc
