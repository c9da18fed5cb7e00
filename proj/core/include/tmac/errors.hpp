#pragma once

#include <stdexcept>
#include <string>

namespace tmac {

// Base of the toolkit error hierarchy. name() is the stable machine-readable
// identifier the CLI prints and maps to exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define TMAC_ERROR_TYPE(Type)                              \
    class Type : public Error {                            \
    public:                                                \
        explicit Type(const std::string& what)             \
            : Error(#Type, what) {}                        \
    }

TMAC_ERROR_TYPE(UnsupportedAlgorithm);
TMAC_ERROR_TYPE(UnsupportedEpoch);
TMAC_ERROR_TYPE(MalformedSuiteName);
TMAC_ERROR_TYPE(TimeBeforeEpoch);
TMAC_ERROR_TYPE(WeakIdentifier);
TMAC_ERROR_TYPE(WeakKeyLength);
TMAC_ERROR_TYPE(MalformedEnvelope);
TMAC_ERROR_TYPE(DomainError);
TMAC_ERROR_TYPE(DuplicateAssignment);
TMAC_ERROR_TYPE(MalformedScenario);
TMAC_ERROR_TYPE(IoError);
TMAC_ERROR_TYPE(StateFileCorrupt);
TMAC_ERROR_TYPE(ParseError);

#undef TMAC_ERROR_TYPE

}  // namespace tmac
