"""Natural-language driven ROV inspection mission stack.

Layers: symbolic plan language and planners on top, a precondition-checked
mission executor in the middle, and a kinematic vehicle simulation with PID
guidance along generated inspection trajectories at the bottom.
"""

__version__ = "0.1.0"
