#pragma once

#include <stdexcept>
#include <string>

namespace conecalc {

// All recoverable failures are thrown as subclasses of Error carrying a
// stable kind() tag so callers (and the CLI) can map them to exit codes
// without string matching.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define CONECALC_ERROR(NAME)                                        \
    class NAME : public Error {                                     \
    public:                                                         \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {} \
    }

CONECALC_ERROR(ZeroVector);
CONECALC_ERROR(NotASublattice);
CONECALC_ERROR(NotSaturated);
CONECALC_ERROR(NonSimplicial);
CONECALC_ERROR(FaceLatticeMismatch);
CONECALC_ERROR(EmbeddingNotIntegral);
CONECALC_ERROR(NotFaceClosed);
CONECALC_ERROR(NotCodimOneFace);
CONECALC_ERROR(ConeNotInComplex);
CONECALC_ERROR(NotInRelativeInterior);
CONECALC_ERROR(NotPrimitiveDirection);
CONECALC_ERROR(MapFaceIncompatible);
CONECALC_ERROR(RefinementExplosion);
CONECALC_ERROR(MixedDimensions);
CONECALC_ERROR(Unbalanced);
CONECALC_ERROR(NotCp);
CONECALC_ERROR(DimensionMismatch);
CONECALC_ERROR(NotConewiseOnto);
CONECALC_ERROR(RankDrop);
CONECALC_ERROR(AssemblyNotComplex);
CONECALC_ERROR(IncomparableAtlases);
CONECALC_ERROR(SignChangeOnCone);
CONECALC_ERROR(MarksNotDistinct);
CONECALC_ERROR(DegreeNotBalanced);
CONECALC_ERROR(InvalidArgument);
CONECALC_ERROR(ParseError);

#undef CONECALC_ERROR

}  // namespace conecalc
