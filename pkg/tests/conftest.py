from hypothesis import settings

settings.register_profile("package", deadline=None, max_examples=50)
settings.load_profile("package")
