"""Base exception classes for Joint Mixreg."""


class JointMixregException(Exception):
    """Base exception for all Joint Mixreg errors.

    All custom exceptions in the joint_mixreg package should inherit
    from this base class for consistent error handling.
    """

    pass
