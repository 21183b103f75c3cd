#pragma once

#include <stdexcept>
#include <string>

namespace atrace {

struct TracebackError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field
struct ZeroInverse : TracebackError {
    ZeroInverse() : TracebackError("inverse of zero requested") {}
};
struct NotPrime : TracebackError {
    explicit NotPrime(const std::string& what) : TracebackError(what) {}
};

// path_model
struct PositionOutOfRange : TracebackError {
    explicit PositionOutOfRange(const std::string& what) : TracebackError(what) {}
};
struct EmptyPathDeletion : TracebackError {
    EmptyPathDeletion() : TracebackError("deleting the only node would leave no source") {}
};

// marking
struct UnmarkedPacket : TracebackError {
    UnmarkedPacket() : TracebackError("update_mark on a packet with flag = 0") {}
};

// reconstruct
struct InsufficientPairs : TracebackError {
    explicit InsufficientPairs(const std::string& what) : TracebackError(what) {}
};
struct DuplicateX : TracebackError {
    DuplicateX() : TracebackError("repeated x value in evaluation set") {}
};
struct InconsistentEvidence : TracebackError {
    explicit InconsistentEvidence(const std::string& what) : TracebackError(what) {}
};

// incremental
struct KOutOfRange : TracebackError {
    explicit KOutOfRange(const std::string& what) : TracebackError(what) {}
};
struct ZeroX : TracebackError {
    ZeroX() : TracebackError("candidate matrix requires nonzero x values") {}
};
struct AmbiguousChange : TracebackError {
    explicit AmbiguousChange(const std::string& what) : TracebackError(what) {}
};
struct StreamExhausted : TracebackError {
    StreamExhausted() : TracebackError("pair source dried up before the decoder finished") {}
};
struct InsufficientBuffer : TracebackError {
    explicit InsufficientBuffer(const std::string& what) : TracebackError(what) {}
};

// stats
struct DegenerateScheme : TracebackError {
    DegenerateScheme() : TracebackError("f_1 = 0: no packets can be marked by the first node") {}
};

// netcode
struct NoPath : TracebackError {
    explicit NoPath(const std::string& what) : TracebackError(what) {}
};
struct EmptyIntersection : TracebackError {
    explicit EmptyIntersection(const std::string& what) : TracebackError(what) {}
};

// io
struct FormatError : TracebackError {
    explicit FormatError(const std::string& what) : TracebackError(what) {}
};

} // namespace atrace
