class VerificationError(Exception):
    message = 'Verification failed!'

    def __init__(self, detail: str = ""):
        self.detail = detail
        super().__init__(f"{self.message} {detail}".strip())


class DomainError(VerificationError):
    message = 'Argument outside the domain!'


class BadPrimeError(VerificationError):
    message = 'Bad prime!'


class NotDivisibleError(VerificationError):
    message = 'Polynomial is not divisible!'

    def __init__(self, detail: str = "", leading_term=None):
        self.leading_term = leading_term
        super().__init__(detail)


class ResourceBudgetError(VerificationError):
    message = 'Resource budget exceeded!'


class ConventionError(VerificationError):
    message = 'Sign or phase convention mismatch!'


class ProfileMismatchError(VerificationError):
    message = 'Profile mismatch!'


class UnsupportedCaseError(VerificationError):
    message = 'Unsupported case!'


class UsageError(VerificationError):
    message = 'Usage error!'
