"""Exception hierarchy shared by the pubmine modules."""


class PubmineError(Exception):
    """Base class for every error raised by this package."""


class CorpusError(PubmineError):
    pass


class DuplicateIdError(CorpusError):
    def __init__(self, pub_id, line=None):
        self.pub_id = pub_id
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate publication id {pub_id!r}{where}")


class MissingColumnError(CorpusError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing required column {name!r}")


class MalformedRowError(CorpusError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"malformed row at line {line}: {reason}")


class UnknownTermError(PubmineError, KeyError):
    def __init__(self, label):
        self.label = label
        super().__init__(label)

    def __str__(self):
        return f"term {self.label!r} is not in the index"


class EmptySelectionError(PubmineError):
    def __init__(self, pattern=None):
        self.pattern = pattern
        super().__init__(f"no keyphrase selected for pattern {pattern!r}")


class NoYearDataError(PubmineError):
    def __init__(self):
        super().__init__("index holds no dated occurrences")
