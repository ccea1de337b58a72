// SPDX-License-Identifier: Apache-2.0
#include "alice/diagnostics.hpp"

#include <sstream>

namespace alice {

std::string SourceLoc::str() const
{
	std::ostringstream out;
	out << (file.empty() ? "<input>" : file) << ":" << line << ":" << column;
	return out.str();
}

const char *error_kind_name(ErrorKind kind)
{
	switch (kind) {
	case ErrorKind::Syntax:
		return "SyntaxError";
	case ErrorKind::UnsupportedConstruct:
		return "UnsupportedConstruct";
	case ErrorKind::UnresolvedModule:
		return "UnresolvedModule";
	case ErrorKind::WidthMismatch:
		return "WidthMismatch";
	case ErrorKind::ReservedIdentifier:
		return "ReservedIdentifier";
	case ErrorKind::RecursionDetected:
		return "RecursionDetected";
	case ErrorKind::UnknownOutput:
		return "UnknownOutput";
	case ErrorKind::EmptyCandidateSet:
		return "EmptyCandidateSet";
	case ErrorKind::ClusterLimitExceeded:
		return "ClusterLimitExceeded";
	case ErrorKind::UnsupportedExpression:
		return "UnsupportedExpression";
	case ErrorKind::AssignmentOverflow:
		return "AssignmentOverflow";
	case ErrorKind::NoSolution:
		return "NoSolution";
	case ErrorKind::ReportParse:
		return "ReportParseError";
	case ErrorKind::ReportSchema:
		return "ReportSchemaError";
	case ErrorKind::ConfigMissingKey:
		return "ConfigMissingKey";
	case ErrorKind::ConfigType:
		return "ConfigTypeError";
	case ErrorKind::ConfigRange:
		return "ConfigRangeError";
	case ErrorKind::Io:
		return "IoError";
	case ErrorKind::Internal:
		return "InternalError";
	}
	return "Error";
}

std::string FlowError::format(ErrorKind kind, const std::string &message, const std::optional<SourceLoc> &loc)
{
	std::ostringstream out;
	if (loc)
		out << loc->str() << ": ";
	out << error_kind_name(kind) << ": " << message;
	return out.str();
}

std::string Diagnostic::str() const
{
	std::ostringstream out;
	if (loc)
		out << loc->str() << ": ";
	out << (severity == Severity::Warning ? "warning: " : "error: ") << message;
	return out.str();
}

} // namespace alice
