import os

from fesl import consts
from fesl import Config, Task
from fesl.streams import build_cycle, default_schedule, generate_batch, synthesize_second_space

# Get the config for the testing environment
config = Config.for_env(consts.ENV_TEST)


def generated_stream(n=300, d1=5, d2=4, seed=0, task=Task.CLASSIFICATION, name='generated'):
    """A small cycle stream built from a generated batch, no files involved."""
    features_old, labels, spec = generate_batch(n, d1, seed, task, name=name)
    features_new = synthesize_second_space(features_old, d2, seed)
    schedule = default_schedule(n, d1, d2, spec.source, task, config.stream)
    return build_cycle(features_old, features_new, labels, schedule, seed, task, name)


def write_file(directory, name, text):
    path = os.path.join(directory, name)
    with open(path, 'w') as stream:
        stream.write(text)
    return path
