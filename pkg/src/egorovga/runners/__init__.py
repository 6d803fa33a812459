from .scenario import ScenarioRunner, kernel_for

__all__ = ["ScenarioRunner", "kernel_for"]
