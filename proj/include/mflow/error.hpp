#pragma once

#include <stdexcept>
#include <string>

namespace mflow {

enum class Err {
    InfeasibleSet,         // polyhedron with empty intersection
    DegenerateDirection,   // prox normal requested at a point of the set
    ArgumentError,         // precondition violated
    WitnessNotFound,       // search exhausted (numerical failure, not theorem falsity)
    DomainError,           // point outside the operator/set domain
    DomainMismatch,        // scaled sum with incompatible domains
    ConstructionError,     // missing oracle / invalid catalog parameters
    IntegratorDiagnostic,  // penalty bound violated (step too large or bad M_f/b)
    BlowUp,                // non-finite state
    MultiplierBound,       // ||eta|| > ||f - g|| + tol on a refined trajectory
    OracleFailure,         // event cap exceeded in the event-driven oracle
    StartOutside,          // sublevel invariance called with V(x0) > alpha
    Unsupported,           // operation not available for this input class
    SchemaError,           // config violates the strict schema
    NotConverged,          // iterative routine exhausted its budget
};

struct Error : std::runtime_error {
    Err code;
    Error(Err c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(Err c, const std::string& what) { throw Error(c, what); }

}  // namespace mflow
