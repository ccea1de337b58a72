// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alice {

struct SourceLoc {
	std::string file;
	int line = 0;
	int column = 0;

	std::string str() const;
};

enum class ErrorKind {
	Syntax,
	UnsupportedConstruct,
	UnresolvedModule,
	WidthMismatch,
	ReservedIdentifier,
	RecursionDetected,
	UnknownOutput,
	EmptyCandidateSet,
	ClusterLimitExceeded,
	UnsupportedExpression,
	AssignmentOverflow,
	NoSolution,
	ReportParse,
	ReportSchema,
	ConfigMissingKey,
	ConfigType,
	ConfigRange,
	Io,
	Internal,
};

const char *error_kind_name(ErrorKind kind);

/// The one exception type of the flow; `kind` lets callers map specific
/// failures (EmptyCandidateSet, NoSolution) to report statuses.
class FlowError : public std::runtime_error {
      public:
	FlowError(ErrorKind kind, std::string message)
	    : std::runtime_error(format(kind, message, std::nullopt)), kind_(kind), message_(std::move(message))
	{
	}
	FlowError(ErrorKind kind, std::string message, SourceLoc loc)
	    : std::runtime_error(format(kind, message, loc)), kind_(kind), message_(std::move(message)), loc_(std::move(loc))
	{
	}

	ErrorKind kind() const { return kind_; }
	const std::string &message() const { return message_; }
	const std::optional<SourceLoc> &loc() const { return loc_; }

      private:
	static std::string format(ErrorKind kind, const std::string &message, const std::optional<SourceLoc> &loc);

	ErrorKind kind_;
	std::string message_;
	std::optional<SourceLoc> loc_;
};

enum class Severity { Warning, Error };

struct Diagnostic {
	Severity severity = Severity::Warning;
	std::string message;
	std::optional<SourceLoc> loc;

	std::string str() const;
};

/// Accumulates warning-level diagnostics (dangling nets, rejected report
/// entries, ...). Errors are thrown as FlowError instead.
struct Diagnostics {
	std::vector<Diagnostic> items;

	void warn(std::string message) { items.push_back({Severity::Warning, std::move(message), std::nullopt}); }
	void warn(std::string message, SourceLoc loc) { items.push_back({Severity::Warning, std::move(message), std::move(loc)}); }
	bool empty() const { return items.empty(); }
};

} // namespace alice
