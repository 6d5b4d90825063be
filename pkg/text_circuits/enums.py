"""
Enumerations used throughout text_circuits.
"""

import enum
import logging


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


class WordClass(enum.Enum):
    N = 'n'
    IV = 'iv'
    TV = 'tv'
    ADJ = 'adj'
    ADV = 'adv'
    ADP = 'adp'
    SCV = 'scv'
    CNJ = 'cnj'


class LinkKind(enum.Enum):
    REGULAR = 'regular'
    REFLEXIVE = 'reflexive'
    POSSESSIVE = 'possessive'


class FusionKind(enum.Enum):
    """
    The three relative pronoun transformations.
    """
    SUBJECT = 'who'
    SUBJECT_SPECIAL = 'who!'
    OBJECT = 'that'


class PairKind(enum.Enum):
    """
    How two consecutive occurrences of a chain relate structurally.
    """
    REFLEXIVE = enum.auto()
    SHARED = enum.auto()
    SEQUENTIAL = enum.auto()
    INVALID = enum.auto()


class WireType(enum.Enum):
    NP = 'NP'
    IVP = 'IVP'
    TVP = 'TVP'
    ADP_ANC = 'ADP_ANC'
    PRONLINK = 'PRONLINK'
    TVP_PSV = 'TVP_PSV'
    POSSLINK = 'POSSLINK'


class NodeKind(enum.Enum):
    LABEL = 'Label'
    IV_INTRO = 'IVIntro'
    TV_INTRO = 'TVIntro'
    ADJ_INTRO = 'AdjIntro'
    ADJ_IS_INTRO = 'AdjIsIntro'
    ADV_IV = 'AdvIV'
    ADV_TV = 'AdvTV'
    ADP_IV = 'AdpIV'
    ADP_TV = 'AdpTV'
    SCV_INTRO = 'ScvIntro'
    CNJ_INTRO = 'CnjIntro'
    SCOPE_ENTER_L = 'ScopeEnterL'
    SCOPE_EXIT_L = 'ScopeExitL'
    SCOPE_ENTER_R = 'ScopeEnterR'
    SCOPE_EXIT_R = 'ScopeExitR'
    LINK_OUT = 'LinkOut'
    LINK_IN = 'LinkIn'
    PSV_OPEN = 'PsvOpen'
    PSV_CLOSE = 'PsvClose'
    POSS_OUT = 'PossOut'
    POSS_IN = 'PossIn'
    ING = 'Ing'
    GATE = 'Gate'
    BOX = 'Box'

    @property
    def isEnter(self) -> bool:
        return self in (NodeKind.SCOPE_ENTER_L, NodeKind.SCOPE_ENTER_R)

    @property
    def isExit(self) -> bool:
        return self in (NodeKind.SCOPE_EXIT_L, NodeKind.SCOPE_EXIT_R)

    @property
    def isModifier(self) -> bool:
        return self in (NodeKind.ADV_IV, NodeKind.ADV_TV, NodeKind.ADP_IV, NodeKind.ADP_TV)

    @property
    def isIntro(self) -> bool:
        return self in (NodeKind.IV_INTRO, NodeKind.TV_INTRO)


class RegionKind(enum.Enum):
    SCV_COMPLEMENT = 'scv_complement'
    CNJ_LEFT = 'cnj_left'
    CNJ_RIGHT = 'cnj_right'
    PASSIVE = 'passive'
    REFLEXIVE = 'reflexive'

    @property
    def isScope(self) -> bool:
        """
        Whether the region is a phrase scope (as opposed to a passive or
        reflexive region).
        """
        return self in (RegionKind.SCV_COMPLEMENT, RegionKind.CNJ_LEFT, RegionKind.CNJ_RIGHT)


class RuleName(enum.Enum):
    LINK_ELIM_1 = 'LinkElim1'
    LINK_ELIM_2 = 'LinkElim2'
    REFLEX_INTRO = 'ReflexIntro'
    REFLEX_ASSOC = 'ReflexAssoc'
    REFLEX_SLIDE = 'ReflexSlide'
    REFLEX_CONTRACT = 'ReflexContract'
    IS_ELIMINATION = 'IsElimination'
    ADV_GATHER = 'AdvGather'
    ADV_ASSOC = 'AdvAssoc'
    ADP_IV_ANCILLA = 'AdpIVAncilla'
    ADP_TV_ANCILLA = 'AdpTVAncilla'
    ADP_GATHER = 'AdpGather'
    ADP_ASSOC = 'AdpAssoc'
    ADP_ADV_ORDER = 'AdpAdvOrder'
    GATE_CONTRACT = 'GateContract'
    SCV_REDUCE = 'ScvReduce'
    CNJ_REDUCE = 'CnjReduce'
    CNJ_SHARED_REDUCE = 'CnjSharedReduce'
    EXISTS_INTRO = 'ExistsIntro'
    AMPERSAND_REDUCE = 'AmpersandReduce'
    PASSIVE_REDUCE = 'PassiveReduce'
    POSSESSIVE_REDUCE = 'PossessiveReduce'
    ING_REDUCE = 'IngReduce'


class GateKind(enum.Enum):
    ADJ = 'adj'
    VERB = 'verb'
    EXISTS = 'exists'


class BoxKind(enum.Enum):
    SCV = 'scv'
    CNJ = 'cnj'
    REFLEXIVE = 'refl'


class SliceKind(enum.Enum):
    GATES = 'gates'
    TWIST = 'twist'


class IssueCode(enum.Enum):
    UNKNOWN_TOKEN = 'UnknownToken'
    RULE_MISMATCH = 'RuleMismatch'
    BAD_LINK = 'BadLink'
    SCOPE_VIOLATION = 'ScopeViolation'
    UNGRAMMATICAL_FUSION = 'UngrammaticalFusion'
    TYPE_MISMATCH = 'TypeMismatch'
    SCOPE_LEAK = 'ScopeLeak'
    UNBALANCED_NP = 'UnbalancedNP'
    WIRE_ORDER_VIOLATION = 'WireOrderViolation'
    CYCLE_DETECTED = 'CycleDetected'
    DUPLICATE_ARG = 'DuplicateArg'
