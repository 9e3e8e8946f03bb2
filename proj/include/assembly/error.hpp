#pragma once

#include <stdexcept>
#include <string>

namespace assembly {

// Base for every domain error. name() is the stable identifier the CLI prints
// verbatim to stderr.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(message)
        , Name(std::move(name))
    {}

    const std::string& name() const noexcept { return Name; }

private:
    std::string Name;
};

#define ASSEMBLY_DEFINE_ERROR(TypeName)                                   \
    class TypeName : public ::assembly::Error {                           \
    public:                                                               \
        explicit TypeName(const std::string& message)                     \
            : ::assembly::Error(#TypeName, message)                       \
        {}                                                                \
    }

ASSEMBLY_DEFINE_ERROR(MalformedDocument);
ASSEMBLY_DEFINE_ERROR(SchemaError);
ASSEMBLY_DEFINE_ERROR(IoError);
ASSEMBLY_DEFINE_ERROR(NoFullArticle);
ASSEMBLY_DEFINE_ERROR(TooFewSources);
ASSEMBLY_DEFINE_ERROR(EmptyQuestionSet);
ASSEMBLY_DEFINE_ERROR(EmptyGroup);
ASSEMBLY_DEFINE_ERROR(InsufficientData);
ASSEMBLY_DEFINE_ERROR(SizeTooLarge);
ASSEMBLY_DEFINE_ERROR(EmptyInput);
ASSEMBLY_DEFINE_ERROR(NotFound);
ASSEMBLY_DEFINE_ERROR(ViewsIncomplete);
ASSEMBLY_DEFINE_ERROR(AlreadySubmitted);
ASSEMBLY_DEFINE_ERROR(SessionClosed);
ASSEMBLY_DEFINE_ERROR(InvalidRequest);

// A pluggable pipeline stage returned output that violates the record contract.
class StageFailure : public Error {
public:
    StageFailure(std::string stage, const std::string& message)
        : Error("StageFailure", "stage '" + stage + "': " + message)
        , Stage(std::move(stage))
    {}

    const std::string& stage() const noexcept { return Stage; }

private:
    std::string Stage;
};

} // namespace assembly
