"""Frozen first-run values, regenerated by ``scripts/freeze_baselines.py``."""

TAN_INTERTWINING_ERRORS = {
    1: 1.9130265550585543,
    2: 1.3191403519112381,
    4: 0.3734975909917464,
    8: 0.14333467263568112,
    16: 0.07079904893384713,
    32: 0.035296010155304154,
}
TRANSFERENCE_ERRORS = {
    2: 6.447243475660183,
    4: 2.182343203318788,
    8: 0.8470264943272541,
}
TAN_KERNEL_C0 = 1.0109958575298734
TAN_KERNEL_C1 = 16.683752079670526
CUTOFF_KERNEL_L1 = {
    2: 5.095856948435923,
    4: 5.182778396187989,
    8: 5.197083537400945,
    16: 5.199033144002904,
}
DISCRETIZATION_C = 10.307598496445536
NP_SUITE_MAX_RATIO = 1.1794147099848888
CONTRAST_WEAK = {
    8: 0.5343959511366978,
    16: 0.3533531752914328,
    32: 0.2998643030970359,
    64: 0.26224742334375084,
}
CONTRAST_S1 = {
    8: 0.7913693035777813,
    16: 0.6212272944971247,
    32: 0.5844813753838753,
    64: 0.553705329484505,
}
FP_MAX_RATIO = {
    1.05: 0.5560769329475622,
    1.1: 0.5552078376939097,
    1.25: 0.5528753462104307,
    1.5: 0.5497680241839318,
    2.0: 0.5456439281501736,
    3.0: 0.5417478008014741,
    4.0: 0.5449026383829533,
}
