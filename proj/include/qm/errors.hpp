#ifndef QM_ERRORS_HPP
#define QM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qm {

// Domain failure with a stable machine-readable code. The CLI prints
// "error: <code>: <detail>" and exits 1; codes never change once released.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define QM_DEFINE_ERROR(Name)                                        \
    class Name : public DomainError {                                \
    public:                                                          \
        explicit Name(const std::string& detail = "")                \
            : DomainError(#Name, detail) {}                          \
    }

QM_DEFINE_ERROR(AbundanceViolation);
QM_DEFINE_ERROR(MalformedCode);
QM_DEFINE_ERROR(InfiniteOccurrence);
QM_DEFINE_ERROR(HorizonTooSmall);
QM_DEFINE_ERROR(HullTooLarge);
QM_DEFINE_ERROR(LetterCollision);
QM_DEFINE_ERROR(NotAntichain);
QM_DEFINE_ERROR(InfiniteMembership);
QM_DEFINE_ERROR(ExhaustedHorizon);
QM_DEFINE_ERROR(FrozenMutation);
QM_DEFINE_ERROR(SignIncoherence);
QM_DEFINE_ERROR(NotAbundantAcyclic);
QM_DEFINE_ERROR(UnreducedWord);
QM_DEFINE_ERROR(DescriptorExhausted);
QM_DEFINE_ERROR(NotLocallyFiniteWindow);
QM_DEFINE_ERROR(GadgetInapplicable);
QM_DEFINE_ERROR(InsufficientSegments);
QM_DEFINE_ERROR(SpecConflict);

#undef QM_DEFINE_ERROR

} // namespace qm

#endif // QM_ERRORS_HPP
