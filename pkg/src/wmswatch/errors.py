"""Exception hierarchy shared across the package.

Every error that callers are expected to branch on gets its own class;
anything else surfaces as a plain ValueError from the offending layer.
"""


class WmsWatchError(Exception):
    """Base class for all package-specific errors."""


# --- capabilities parsing ---------------------------------------------------

class NotXml(WmsWatchError):
    """Payload is not well-formed XML."""


class NotWms(WmsWatchError):
    """Well-formed XML whose root element is not a WMS capabilities root."""


class Truncated(WmsWatchError):
    """Payload exceeds the configured size cap."""


class NoNamedLayer(WmsWatchError):
    """Capabilities document advertises no requestable (named) layer."""


class Unparseable(WmsWatchError):
    """Raw dimension string contains no recognizable date token."""


# --- URL handling -----------------------------------------------------------

class MalformedUrl(WmsWatchError):
    """URL is not absolute http/https, or cannot be split."""


# --- probing ----------------------------------------------------------------

class NoUsableFormat(WmsWatchError):
    """Capabilities advertises no output format we can request."""


# --- scheduling -------------------------------------------------------------

class InfeasibleSchedule(WmsWatchError):
    """Group count times slot budget cannot fit into the probe interval."""


# --- analytics --------------------------------------------------------------

class EmptyWindow(WmsWatchError):
    """A QoS window with zero probe records."""


class NoFailures(WmsWatchError):
    """Error-share computation over a window with no failed records."""


class EmptySamples(WmsWatchError):
    """Histogram over an empty sample."""


class TooFewSamples(WmsWatchError):
    """Power-law tail smaller than the configured floor."""


class DegenerateTail(WmsWatchError):
    """All tail samples identical; the MLE exponent diverges."""


class TooFewSites(WmsWatchError):
    """Distance regression needs at least three sites with data."""


class ZeroVariance(WmsWatchError):
    """All regressor values identical; the slope is undefined."""


class MissingGeolocation(WmsWatchError):
    """Service or site lacks the coordinates an analysis requires."""


# --- store ------------------------------------------------------------------

class StoreError(WmsWatchError):
    """Base class for persistence errors."""


class ReferentialViolation(StoreError):
    """Record references a service or site that does not exist."""


class DuplicateRecord(StoreError):
    """Append of an already-present (service, site, op, started_at) record."""


class ClockSkew(StoreError):
    """Record timestamp lies in the future beyond the allowed skew."""


class BadRange(StoreError):
    """Query interval with from > to."""


class UnknownId(StoreError):
    """Lookup of a service/site/campaign id that is not in the store."""


class AddressInUse(StoreError):
    """REST server could not bind its address."""
