"""Exception types shared across the library."""


class SumcoreError(Exception):
    """Base class for all library errors."""


class NotALatinSquare(SumcoreError):
    def __init__(self, kind, index, value):
        self.kind = kind      # "row" or "column"
        self.index = index    # offending row/column
        self.value = value    # repeated entry
        super().__init__(f"{kind} {index} repeats entry {value}")


class BadBounds(SumcoreError):
    pass


class SpecOutOfRange(SumcoreError):
    pass


class ElementOutOfRange(SumcoreError):
    pass


class WindowTooLarge(SumcoreError):
    pass


class BadInterval(SumcoreError):
    pass


class BadAlpha(SumcoreError):
    pass


class ModelMismatch(SumcoreError):
    pass


class BadCore(SumcoreError):
    pass


class InvalidInput(SumcoreError):
    pass


class ParseError(SumcoreError):
    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = tuple(expected)
        near = text[position:position + 12]
        super().__init__(
            f"parse error at position {position} (near {near!r}): "
            f"expected one of {', '.join(self.expected)}"
        )
