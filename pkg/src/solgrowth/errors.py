class ResourceLimitError(RuntimeError):
    """A construction or search would exceed its configured budget.

    ``estimate`` carries the size that triggered the refusal (states,
    elements, ...) so callers can report it without parsing the message.
    """

    def __init__(self, message: str, *, what: str = "states", estimate: int | None = None,
                 limit: int | None = None):
        super().__init__(message)
        self.what = what
        self.estimate = estimate
        self.limit = limit

    def to_dict(self) -> dict:
        return {
            "error": "resource_limit",
            "message": str(self),
            "what": self.what,
            "estimate": self.estimate,
            "limit": self.limit,
        }
