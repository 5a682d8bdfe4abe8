"""swarmkit: hardware-agnostic swarm behaviours with a deterministic simulation harness."""

from .behaviors import (
    NO_GOAL_YET,
    CoincidentAgents,
    MissingGoal,
    MotionCommand,
    NeighborView,
    consensus_step,
    exploration_step,
    exploration_velocity,
    leader_follower_goal,
    perimeter_step,
    search_and_explore_step,
)
from .core import (
    AgentState,
    BehaviorKind,
    BehaviorSpec,
    ConfigError,
    Heading,
    Vec2,
    ZeroVector,
    normalize,
    seeded_rng,
)
from .engine import Engine, RunResult, StepRecord, Termination, UnknownAgent, run
from .scenario import ScenarioConfig, load, load_bundled

__version__ = "0.1.0"

__all__ = [
    "NO_GOAL_YET", "AgentState", "BehaviorKind", "BehaviorSpec", "CoincidentAgents", "ConfigError",
    "Engine", "Heading", "MissingGoal", "MotionCommand", "NeighborView", "RunResult",
    "ScenarioConfig", "StepRecord", "Termination", "UnknownAgent", "Vec2", "ZeroVector",
    "consensus_step", "exploration_step", "exploration_velocity", "leader_follower_goal",
    "load", "load_bundled", "normalize", "perimeter_step", "run", "search_and_explore_step",
    "seeded_rng",
]
