#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hopfcyc {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A structural axiom failed during eager verification.  Carries the axiom
/// name and a human-readable witness (usually a basis element label).
struct AxiomViolation : Error {
    std::string axiom;
    std::string witness;
    AxiomViolation(std::string ax, std::string wit)
        : Error("axiom violation: " + ax + " (witness: " + wit + ")"),
          axiom(std::move(ax)), witness(std::move(wit)) {}
};

struct NotAComplex : Error {
    using Error::Error;
};

struct ActionMismatch : Error {
    using Error::Error;
};

/// The Galois map is not bijective; `defect` is the rank deficiency.
struct NotLeftHopf : Error {
    int defect;
    std::string witness;
    NotLeftHopf(int d, std::string wit)
        : Error("Galois map is not bijective (rank defect " + std::to_string(d) +
                ", kernel witness: " + wit + ")"),
          defect(d), witness(std::move(wit)) {}
};

struct CompatibilityError : Error {
    using Error::Error;
};

/// An operator failed to map the balancing-relation span into itself.
struct WellDefinednessFailure : Error {
    std::string op;
    std::string witness;
    WellDefinednessFailure(std::string o, std::string wit)
        : Error("operator " + o + " is not well-defined on the quotient (relation witness: " + wit + ")"),
          op(std::move(o)), witness(std::move(wit)) {}
};

struct DescentFailure : Error {
    std::string op;
    std::string witness;
    DescentFailure(std::string o, std::string wit)
        : Error("operator " + o + " does not descend (witness: " + wit + ")"),
          op(std::move(o)), witness(std::move(wit)) {}
};

struct NotCyclic : Error {
    using Error::Error;
};

struct NotSaYD : Error {
    using Error::Error;
};

struct CampanillaRequired : Error {
    using Error::Error;
};

struct IsoFailure : Error {
    int degree;
    int defect;
    IsoFailure(int n, int d)
        : Error("chain isomorphism fails in degree " + std::to_string(n) +
                " (defect rank " + std::to_string(d) + ")"),
          degree(n), defect(d) {}
};

struct NotAGroup : Error {
    using Error::Error;
};

struct NotGrouplike : Error {
    std::string defect;
    explicit NotGrouplike(std::string d)
        : Error("element is not grouplike: " + d), defect(std::move(d)) {}
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace hopfcyc
