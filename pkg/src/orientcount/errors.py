"""Exception types shared across the package."""


class OrientcountError(Exception):
    """Base class for all errors raised by orientcount."""


# -- map construction ---------------------------------------------------------

class NonSymmetricAdjacency(OrientcountError):
    """Rotation lists do not describe a symmetric adjacency."""


class EulerViolation(OrientcountError):
    """The rotation system is not a planar (genus zero, connected) embedding."""


class LoopEdge(OrientcountError):
    """A loop was found where only simple input is accepted."""


class MultiEdge(OrientcountError):
    """A parallel edge was found where only simple input is accepted."""


class NotThreeConnected(OrientcountError):
    """Operation requires a 3-connected map."""


class SpecialVerticesNotOnOuterFace(OrientcountError):
    """Suspension vertices must lie on the outer face in clockwise order."""


# -- generators ---------------------------------------------------------------

class BadParameters(OrientcountError):
    """Family parameters out of range."""


class UnknownFace(OrientcountError):
    """A stacking step named a face that does not exist."""


class NoCanonicalDefined(OrientcountError):
    """The family has no canonical orientation."""


# -- orientation engine -------------------------------------------------------

class Infeasible(OrientcountError):
    """No orientation satisfies the out-degree demands."""


class CycleNotDirected(OrientcountError):
    """Attempt to flip a cycle that is not directed in the orientation."""


class CapExceeded(OrientcountError):
    """More orientations than the configured cap."""


class LatticeViolation(OrientcountError):
    """The flip graph failed a lattice axiom; indicates an engine bug."""


# -- structures ---------------------------------------------------------------

class NoColoring(OrientcountError):
    """No edge coloring satisfies the wood axioms for this orientation."""


class MultipleColorings(OrientcountError):
    """More than one edge coloring satisfies the wood axioms."""


class NotInnerTriangulation(OrientcountError):
    """Operation requires a map whose bounded faces are all triangles."""


class Stalled(OrientcountError):
    """Sign decoding ran out of applicable rules before orienting all edges."""


class AxiomViolation(OrientcountError):
    """Sign decoding produced a contradiction with the orientation axioms."""


class NotGridLike(OrientcountError):
    """Face coloring codec requires inner vertices of degree four."""


class InvalidInput(OrientcountError):
    """Input object violates the operation's precondition."""


# -- reductions / transfer ----------------------------------------------------

class SizeExceeded(OrientcountError):
    """Instance too large for the exact backend."""


class Disconnected(OrientcountError):
    """Operation requires a connected graph."""


class NotPrimitive(OrientcountError):
    """Transfer matrix is not primitive; Perron-Frobenius unavailable."""


class NoConvergence(OrientcountError):
    """Power iteration hit the iteration cap before reaching tolerance."""


# -- cli ----------------------------------------------------------------------

class UnknownSuite(OrientcountError):
    """No verification suite with that name."""
