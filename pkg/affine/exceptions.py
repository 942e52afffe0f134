class SubgroupError(ValueError):
    pass
