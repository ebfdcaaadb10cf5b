import factory  # type: ignore

from hurwitz.cli import RunConfig


class SmallOOverridesFactory(factory.DictFactory):
    mode = "desk"
    n = factory.List([1, 40])
    q = factory.List(["8"])
    family_cap = 3


class TauOverridesFactory(factory.DictFactory):
    mode = "desk"
    n = factory.List([1, 10**6])
    q = factory.List(["3"])
    family_cap = 2


class RunConfigFactory(factory.Factory):
    class Meta:
        model = RunConfig

    command = "construct"
    kind = "small-o"
    rate = "x^-4"
    depth = 2
    seed = factory.Sequence(lambda n: n)
    budget = 200_000
    precision = 64
    mode = "desk"
    epsilon = "1/5"
