from dotenv import load_dotenv

# SLC_* overrides may live in a local .env file
load_dotenv()
