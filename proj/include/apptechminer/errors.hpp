#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atm {

// Base class for all pipeline errors. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class FileUnreadable : public Error {
public:
    explicit FileUnreadable(const std::string& path)
        : Error("cannot read file: " + path) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& detail) : Error("i/o error: " + detail) {}
};

class MalformedRecord : public Error {
public:
    MalformedRecord(std::size_t line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": malformed record: " + detail),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& id) : Error("duplicate paper id: " + id) {}
};

class InvalidRange : public Error {
public:
    explicit InvalidRange(const std::string& detail) : Error("invalid range: " + detail) {}
};

class MissingThreshold : public Error {
public:
    explicit MissingThreshold(int n)
        : Error("scheme 3 requires a threshold for every n-gram order; missing n=" +
                std::to_string(n)) {}
};

class InvalidLambda : public Error {
public:
    explicit InvalidLambda(double lambda)
        : Error("jm_lambda must lie strictly between 0 and 1, got " +
                std::to_string(lambda)) {}
};

class NoModels : public Error {
public:
    NoModels() : Error("no language models available for classification") {}
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t local, std::size_t global)
        : Error("local vector dimension " + std::to_string(local) +
                " does not match global vector dimension " + std::to_string(global)) {}
};

class EmptyRanking : public Error {
public:
    EmptyRanking() : Error("ranked list is empty") {}
};

class EmptyGold : public Error {
public:
    EmptyGold() : Error("gold set is empty") {}
};

class NoOverlap : public Error {
public:
    NoOverlap() : Error("prediction and gold label maps share no paper ids") {}
};

class DegenerateChanceAgreement : public Error {
public:
    DegenerateChanceAgreement()
        : Error("chance agreement is 1 while observed agreement is below 1; "
                "kappa is undefined") {}
};

class UnknownArea : public Error {
public:
    explicit UnknownArea(const std::string& area) : Error("unknown area: " + area) {}
};

class UnknownTechnique : public Error {
public:
    explicit UnknownTechnique(const std::string& t) : Error("unknown technique: " + t) {}
};

class SchemaVersionMismatch : public Error {
public:
    SchemaVersionMismatch(int got, int want)
        : Error("knowledge base schema version " + std::to_string(got) +
                " does not match expected " + std::to_string(want)) {}
};

class InfeasibleConfig : public Error {
public:
    explicit InfeasibleConfig(const std::string& detail)
        : Error("infeasible synthesis config: " + detail) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& detail) : Error("usage: " + detail) {}
};

}  // namespace atm
