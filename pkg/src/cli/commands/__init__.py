from cli.commands import answer, chase, classify, contain, egd_check, forest, history, store_stats

COMMAND_MODULES = [classify, chase, answer, contain, egd_check, forest, store_stats, history]
