#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace citedist {

/// Dense author index assigned at ingestion (first appearance order).
using AuthorId = std::uint32_t;
/// Dense paper index into a CorpusStore.
using PaperIndex = std::uint32_t;

/// A caller violated an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input could not be read at all (missing file, I/O failure).
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input was readable but produced no valid record.
class EmptyCorpusError : public IngestError {
public:
    using IngestError::IngestError;
};

/// Yearly updates applied out of order.
class SequenceError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Required per-year artifacts (ledgers, states) are missing.
class IncompleteStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace citedist
