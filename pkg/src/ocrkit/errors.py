"""Exception hierarchy shared across the toolkit."""


class OcrKitError(Exception):
    """Base class for all toolkit errors."""


class UnbalancedHtml(OcrKitError):
    """An HTML region has an unclosed or mismatched tag."""


class IllegalNesting(OcrKitError):
    """A table element appears outside its legal parent (e.g. <tr> outside <table>)."""


class MalformedMdTable(OcrKitError):
    """A Markdown table row has an inconsistent cell count."""


class EmptyReference(OcrKitError):
    """The reference side of a metric is empty after normalization."""


class EmptyText(OcrKitError):
    """Perplexity was requested for an empty string."""


class EmptyCorpus(OcrKitError):
    """A corpus-level operation received an empty corpus."""


class LengthMismatch(OcrKitError):
    """Reference and hypothesis lists differ in length."""


class OutOfRange(OcrKitError):
    """A score argument fell outside its documented range."""


class NotATable(OcrKitError):
    """The given tree is not rooted at a <table> element."""


class SchemaError(OcrKitError):
    """A manifest or plan file does not match its schema."""


class DuplicateId(OcrKitError):
    """Two manifest entries share an id."""


class NoPredictions(OcrKitError):
    """The predictions directory contains no usable files."""


class UnknownTransform(OcrKitError):
    """A transform name is not present in the registry."""


class NotDivisibleByThree(OcrKitError):
    """Image count cannot be split into three equal subsets."""
