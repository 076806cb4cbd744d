"""
Tree decompositions, nice form and the surgery used by the kernelizers.
"""
